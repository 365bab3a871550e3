"""Deterministic fixtures, seeded planted-partition graphs and parameter sweeps.

Random streams use numpy's PCG64 seeded through ``SeedSequence``.  A sweep
point ``(i, r)`` (q-index ``i``, replicate ``r``) draws from
``SeedSequence(seed, spawn_key=(i, r))``, so every task owns an independent,
reproducible stream regardless of execution order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .assort import profile_scalar
from .collapse import collapse_decomposition
from .errors import UnknownFixture
from .graph import Graph, build_graph
from .sis import SISParams, implication_chain
from .stratify import Partition, stratify_arcs


def rng_for(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key)))


@dataclass(frozen=True)
class SBMSpec:
    """Planted partition.  ``boundary_size`` switches to the amplified variant.

    There the expected number of cross arcs between two blocks stays
    ``q * n_a * n_b``, but it is placed on the first ``boundary_size`` nodes
    of each block first.  Only the overflow, once those slots are saturated,
    spreads uniformly over the remaining cross pairs, so ``q = p`` still
    means no bottleneck.
    """

    block_sizes: tuple[int, ...]
    p_within: float
    q_between: float
    weight: float = 1.0
    directed: bool = True
    seed: int = 0
    boundary_size: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(s) for s in self.block_sizes))
        if any(s < 1 for s in self.block_sizes):
            raise ValueError("block sizes must be positive")
        for p in (self.p_within, self.q_between):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        if self.boundary_size is not None and not 1 <= self.boundary_size <= min(self.block_sizes):
            raise ValueError("boundary_size must be between 1 and the smallest block size")


def sbm(spec: SBMSpec, rng: np.random.Generator | None = None) -> tuple[Graph, Partition]:
    rng = rng or rng_for(spec.seed)
    sizes = spec.block_sizes
    n = sum(sizes)
    block_of = np.repeat(np.arange(len(sizes)), sizes)
    same = block_of[:, None] == block_of[None, :]
    prob = np.where(same, spec.p_within, spec.q_between)
    if spec.boundary_size is not None:
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        designated = np.zeros(n, dtype=bool)
        for s in starts:
            designated[s:s + spec.boundary_size] = True
        b2 = spec.boundary_size**2
        pairs = np.outer(sizes, sizes).astype(float)
        expected = spec.q_between * pairs
        q_slot = np.minimum(1.0, expected / b2)
        q_rest = np.where(pairs > b2, (expected - q_slot * b2) / np.maximum(pairs - b2, 1.0), 0.0)
        slot = designated[:, None] & designated[None, :]
        cross = np.where(slot, q_slot[block_of][:, block_of], q_rest[block_of][:, block_of])
        prob = np.where(same, spec.p_within, cross)
    draw = rng.random((n, n)) < prob
    np.fill_diagonal(draw, False)
    if not spec.directed:
        draw = np.triu(draw, 1)
    u, v = np.nonzero(draw)
    edges = [(a, b, spec.weight) for a, b in zip(u.tolist(), v.tolist())]
    return build_graph(n, edges, spec.directed), Partition(block_of, len(sizes))


@dataclass(frozen=True)
class Fixture:
    graph: Graph
    partition: Partition
    attributes: dict = field(default_factory=dict)

    @property
    def attribute(self):
        return next(iter(self.attributes.values()), None)


def _two_triangles(directed: bool) -> Fixture:
    if directed:
        edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]
    else:
        edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    return Fixture(build_graph(6, edges, directed), Partition.from_blocks([[0, 1, 2], [3, 4, 5]]))


def _dir_cycle(n: int = 4) -> Fixture:
    G = build_graph(n, [(i, (i + 1) % n) for i in range(n)], True)
    return Fixture(G, Partition.from_labels([int(i >= n // 2) for i in range(n)]))


def _k22() -> Fixture:
    G = build_graph(4, [(0, 2), (0, 3), (1, 2), (1, 3)], False)
    return Fixture(G, Partition.from_blocks([[0, 1], [2, 3]]))


def _regular(n: int = 8, d: int = 2) -> Fixture:
    """Circulant d-regular ring; odd d needs even n and adds the antipodal chord."""
    if not 0 < d < n or (d % 2 and n % 2):
        raise ValueError("need 0 < d < n, and n even when d is odd")
    edges = {(i, (i + j) % n) for i in range(n) for j in range(1, d // 2 + 1)}
    if d % 2:
        edges |= {(i, i + n // 2) for i in range(n // 2)}
    G = build_graph(n, sorted(edges), False)
    return Fixture(G, Partition((np.arange(n) >= n // 2).astype(np.int64), 2))


def _amplified(p: float = 0.4, q: float = 0.004, sizes=(30, 30), seed: int = 0,
               boundary_size: int = 3, directed: bool = True) -> Fixture:
    spec = SBMSpec(tuple(sizes), p, q, 1.0, directed, seed, boundary_size)
    G, P = sbm(spec)
    return Fixture(G, P)


@lru_cache(maxsize=None)
def _corollary_search(levels: int = 3):
    fx = _two_triangles(True)
    strat = stratify_arcs(fx.graph, fx.partition)
    found = []
    for vec in itertools.product(range(levels), repeat=fx.graph.n):
        a = np.array(vec, dtype=float)
        r_in = collapse_decomposition(strat, a).r_in
        if r_in is None:
            continue
        prof = profile_scalar(strat, a).values()
        for b, r_b, prof_b in found:
            if abs(r_in - r_b) >= 1e-10:
                continue
            gaps = [abs(u - v) for u, v in zip(prof, prof_b) if u is not None and v is not None]
            if gaps and max(gaps) > 0.1:
                return b, a
        found.append((a, r_in, prof))
    raise RuntimeError("no corollary witness in the search grid")


def _corollary_pair() -> Fixture:
    fx = _two_triangles(True)
    a, b = _corollary_search()
    return Fixture(fx.graph, fx.partition, {"a": a.copy(), "b": b.copy()})


FIXTURES = {
    "two_triangle_bridge": lambda: _two_triangles(False),
    "two_triangle_bridge_directed": lambda: _two_triangles(True),
    "dir_cycle": _dir_cycle,
    "k22": _k22,
    "regular": _regular,
    "amplified": _amplified,
    "corollary_pair": _corollary_pair,
}


def fixture(name: str, **params) -> Fixture:
    try:
        make = FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return make(**params)


@dataclass(frozen=True)
class SweepRecord:
    q_between: float
    replicate: int
    phi_max: float | None
    min_gap: float | None
    dominance_all: bool
    r_bi: float | None
    verdict: str


@dataclass
class SweepResult:
    seed: int
    records: list[SweepRecord]

    def summary(self) -> list[dict]:
        out = []
        for q in sorted({r.q_between for r in self.records}):
            rows = [r for r in self.records if r.q_between == q]
            dom = sum(r.dominance_all for r in rows)
            neg = sum(r.r_bi is not None and r.r_bi < 0 for r in rows)
            both = sum(r.dominance_all and r.r_bi is not None and r.r_bi < 0 for r in rows)
            out.append({"q_between": q, "replicates": len(rows), "dominance_fraction": dom / len(rows),
                        "negative_bi_fraction": neg / len(rows), "joint_fraction": both / len(rows)})
        return out


def _sweep_point(task) -> SweepRecord:
    base, i, q, r, params = task
    spec = replace(base, q_between=q)
    G, P = sbm(spec, rng_for(base.seed, i, r))
    rep = implication_chain(G, P, params)
    return SweepRecord(q, r, rep.phi_max, rep.min_gap, rep.dominance_all, rep.r_bi, rep.verdict)


def chain_sweep(base: SBMSpec, q_values, params: SISParams, replicates: int = 1, jobs: int = 1) -> SweepResult:
    """Run the implication chain for every ``(q, replicate)``; records sorted by ``q`` then replicate."""
    tasks = [(base, i, float(q), r, params) for i, q in enumerate(q_values) for r in range(replicates)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_point, tasks))
    else:
        records = [_sweep_point(t) for t in tasks]
    records.sort(key=lambda rec: (rec.q_between, rec.replicate))
    return SweepResult(base.seed, records)
