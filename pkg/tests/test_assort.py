import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ibprofile.assort import (
    EMPTY_STRATUM,
    ZERO_DENOMINATOR,
    ZERO_VARIANCE,
    directed_modularity,
    is_defined,
    multipartite_rho,
    profile_categorical,
    profile_scalar,
    rho_categorical,
    rho_modularity_consistency,
    rho_scalar,
)
from ibprofile.errors import EmptyGraph, ZeroDenominator
from ibprofile.genlab import fixture
from ibprofile.graph import build_graph
from ibprofile.stratify import Partition, stratify_arcs

from conftest import graphs_with_partition, random_instance
from oracles import modularity_double_loop, pair_list, pearson_pairs


def test_bridge_degree_assortativity_matches_oracle():
    fx = fixture("two_triangle_bridge")
    deg = fx.graph.adjacency.sum(axis=1)
    pairs = pair_list(fx.graph.edges(), False)
    ref = pearson_pairs([deg[u] for u, _, _ in pairs], [deg[v] for _, v, _ in pairs])
    assert rho_scalar(fx.graph, deg) == pytest.approx(ref, abs=1e-12)
    assert rho_scalar(fx.graph, deg, "pearson") == pytest.approx(ref, abs=1e-12)


def test_constant_attribute_undefined():
    fx = fixture("two_triangle_bridge")
    r = rho_scalar(fx.graph, np.ones(6))
    assert not is_defined(r) and r.reason == ZERO_VARIANCE


def test_empty_graph_raises():
    with pytest.raises(EmptyGraph):
        rho_scalar(build_graph(3, []), [1.0, 2.0, 3.0])


def test_k22_exact():
    fx = fixture("k22")
    rho, Q, denom = rho_modularity_consistency(fx.graph, fx.partition)
    assert rho == pytest.approx(-1.0, abs=1e-12)
    assert Q == pytest.approx(-0.5, abs=1e-12)
    assert denom == pytest.approx(0.5, abs=1e-12)
    assert multipartite_rho([0.5, 0.5]) == pytest.approx(-1.0, abs=1e-15)


def test_directed_bridge_modularity_value():
    fx = fixture("two_triangle_bridge_directed")
    assert directed_modularity(fx.graph, fx.partition) == pytest.approx(18 / 49, abs=1e-15)


def test_single_block_zero_denominator():
    fx = fixture("two_triangle_bridge")
    r, _ = rho_categorical(fx.graph, [0] * 6)
    assert r.reason == ZERO_DENOMINATOR
    with pytest.raises(ZeroDenominator):
        rho_modularity_consistency(fx.graph, Partition.from_labels([0] * 6))


def test_multipartite_rejects_bad_marginals():
    with pytest.raises(ValueError):
        multipartite_rho([0.5, 0.6])


@given(graphs_with_partition())
def test_modularity_matches_double_loop(gp):
    G, P = gp
    A = G.adjacency.tolist()
    ref = modularity_double_loop(A, P.block_of.tolist())
    assert directed_modularity(G, P) == pytest.approx(ref, abs=1e-12)
    ref2 = modularity_double_loop(A, P.block_of.tolist(), gamma=0.5)
    assert directed_modularity(G, P, gamma=0.5) == pytest.approx(ref2, abs=1e-12)


@given(graphs_with_partition(n_min=2), st.integers(0, 2**32 - 1))
def test_pearson_and_adjacency_forms_agree(gp, seed):
    G, _ = gp
    x = np.random.default_rng(seed).normal(size=G.n)
    a = rho_scalar(G, x, "adjacency")
    b = rho_scalar(G, x, "pearson")
    assert is_defined(a) == is_defined(b)
    if is_defined(a):
        assert abs(a - b) <= 1e-10
        pairs = pair_list(G.edges(), G.directed)
        ref = pearson_pairs([x[u] for u, _, _ in pairs], [x[v] for _, v, _ in pairs],
                            [w for *_, w in pairs])
        assert abs(a - ref) <= 1e-9
        assert -1 - 1e-12 <= a <= 1 + 1e-12


@given(graphs_with_partition())
def test_rho_equals_normalised_modularity(gp):
    G, P = gp
    r, mm = rho_categorical(G, P.block_of, P.K)
    denom = 1 - mm.a @ mm.b
    if denom <= 1e-9:
        assert not is_defined(r)
        return
    Q = directed_modularity(G, P)
    assert abs(r - Q / denom) <= 1e-10


def _random_multipartite(rng, K, sizes, directed, p=0.6):
    labels = np.repeat(np.arange(K), sizes)
    n = len(labels)
    edges = [(u, v, float(rng.integers(1, 4)))
             for u in range(n) for v in range(n)
             if labels[u] != labels[v] and (directed or u < v) and rng.random() < p]
    return build_graph(n, edges, directed), labels


@pytest.mark.parametrize("seed", range(20))
def test_multipartite_closed_form(seed):
    rng = np.random.default_rng(seed)
    K = int(rng.integers(2, 5))
    G, labels = _random_multipartite(rng, K, rng.integers(1, 6, size=K), bool(seed % 2))
    if G.num_arcs == 0:
        return
    r, mm = rho_categorical(G, labels, K)
    assert np.allclose(np.diag(mm.e), 0)
    if not G.directed or np.allclose(mm.a, mm.b):
        expected = multipartite_rho(mm.a)
        assert r == pytest.approx(expected, abs=1e-10)
    assert r <= 1e-12


def test_profile_bridge_values():
    fx = fixture("two_triangle_bridge")
    strat = stratify_arcs(fx.graph, fx.partition)
    x = np.array([0.0, 1.0, 2.0, 2.0, 1.0, 0.0])
    prof = profile_scalar(strat, x)
    # II edges join 0-1 and 4-5: values (0,1) both ways -> r = -1
    assert prof["II"].value == pytest.approx(-1.0, abs=1e-12)
    assert prof["BB"].reason == ZERO_VARIANCE  # both endpoints have x = 2
    cat = profile_categorical(strat, fx.partition.block_of)
    assert cat["II"].value == pytest.approx(1.0, abs=1e-12)  # II arcs never cross blocks
    assert cat["BB"].value == pytest.approx(-1.0, abs=1e-12)


def test_profile_empty_stratum():
    fx = fixture("k22")
    prof = profile_scalar(stratify_arcs(fx.graph, fx.partition), np.arange(4.0))
    assert prof["II"].reason == EMPTY_STRATUM and prof["IB"].reason == EMPTY_STRATUM


@pytest.mark.parametrize("seed", range(30))
def test_profile_matches_pearson_per_stratum(seed):
    G, P, x = random_instance(np.random.default_rng(seed), n_max=30)
    strat = stratify_arcs(G, P)
    prof = profile_scalar(strat, x)
    for name in strat.names:
        t, h, w = strat.sample(name)
        ref = pearson_pairs(x[t].tolist(), x[h].tolist(), w.tolist()) if len(t) else None
        got = prof[name].value
        if ref is None or got is None:
            assert (got is None) or abs(got) <= 1  # near-degenerate thresholds may differ
            continue
        assert got == pytest.approx(ref, abs=1e-9)


@given(graphs_with_partition(), st.integers(0, 2**32 - 1))
def test_profile_categorical_relabel_invariant(gp, seed):
    G, P = gp
    rng = np.random.default_rng(seed)
    lab = rng.integers(0, 3, size=G.n)
    perm = rng.permutation(3)
    strat = stratify_arcs(G, P)
    a = profile_categorical(strat, lab, 3).values()
    b = profile_categorical(strat, perm[lab], 3).values()
    for u, v in zip(a, b):
        assert (u is None) == (v is None)
        if u is not None:
            assert u == pytest.approx(v, abs=1e-12)
