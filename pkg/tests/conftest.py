import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ibprofile.graph import build_graph
from ibprofile.stratify import Partition

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_instance(rng, n_max=50, directed=None, weighted=None, k_max=4, p=None):
    """Random graph, partition and attribute drawn from ``rng``."""
    n = int(rng.integers(4, n_max + 1))
    directed = bool(rng.integers(2)) if directed is None else directed
    weighted = bool(rng.integers(2)) if weighted is None else weighted
    K = int(rng.integers(1, min(k_max, n) + 1))
    block = rng.permutation(np.arange(n) % K)
    p = float(rng.uniform(0.05, 0.5)) if p is None else p
    edges = []
    for u in range(n):
        for v in range(n):
            if u == v or (not directed and v < u):
                continue
            pin = p if block[u] == block[v] else p / 4
            if rng.random() < pin:
                edges.append((u, v, float(rng.integers(1, 5)) if weighted else 1.0))
    G = build_graph(n, edges, directed)
    return G, Partition.from_labels(block.tolist()), rng.normal(size=n)


@st.composite
def graphs_with_partition(draw, n_min=3, n_max=12, directed=None, max_weight=4):
    n = draw(st.integers(n_min, n_max))
    directed = draw(st.booleans()) if directed is None else directed
    pairs = [(u, v) for u in range(n) for v in range(n) if directed or u <= v]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=3 * n))
    weights = draw(st.lists(st.integers(1, max_weight), min_size=len(chosen), max_size=len(chosen)))
    K = draw(st.integers(1, min(4, n)))
    labels = draw(st.lists(st.integers(0, K - 1), min_size=n, max_size=n))
    G = build_graph(n, [(u, v, float(w)) for (u, v), w in zip(chosen, weights)], directed)
    return G, Partition.from_labels(labels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call":
                lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
