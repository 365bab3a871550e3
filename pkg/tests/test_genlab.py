import numpy as np
import pytest

from ibprofile.collapse import collapse_decomposition
from ibprofile.errors import UnknownFixture
from ibprofile.genlab import SBMSpec, chain_sweep, fixture, rng_for, sbm
from ibprofile.sis import SISParams
from ibprofile.stratify import classify_roles, stratify_arcs
from ibprofile.assort import profile_scalar


def test_rng_streams_are_independent_and_reproducible():
    a = rng_for(5, 0, 1).random(4)
    assert np.array_equal(a, rng_for(5, 0, 1).random(4))
    assert not np.array_equal(a, rng_for(5, 1, 0).random(4))


def test_sbm_reproducible_and_block_structure():
    spec = SBMSpec((5, 7), 0.5, 0.1, seed=3)
    G1, P1 = sbm(spec)
    G2, P2 = sbm(spec)
    assert np.array_equal(G1.tails, G2.tails) and np.array_equal(G1.heads, G2.heads)
    assert P1.block_of.tolist() == [0] * 5 + [1] * 7
    assert G1.directed and not np.any(G1.tails == G1.heads)


def test_sbm_zero_q_has_no_cross_arcs():
    G, P = sbm(SBMSpec((6, 6), 0.7, 0.0, seed=1))
    assert np.all(P.block_of[G.tails] == P.block_of[G.heads])


def test_sbm_undirected_density():
    G, _ = sbm(SBMSpec((40,), 0.3, 0.0, directed=False, seed=2))
    assert G.num_arcs / (40 * 39 / 2) == pytest.approx(0.3, abs=0.05)


def test_amplified_cross_arcs_stay_on_boundary_slots():
    fx = fixture("amplified", q=0.008, seed=4)
    G, P = fx.graph, fx.partition
    cross = P.block_of[G.tails] != P.block_of[G.heads]
    assert cross.any()
    local = np.concatenate([np.arange(30), np.arange(30)])
    assert np.all(local[G.tails[cross]] < 3) and np.all(local[G.heads[cross]] < 3)
    boundary = classify_roles(G, P).boundary
    assert boundary.sum() <= 6


def test_amplified_keeps_expected_cross_count():
    # q = p: slots saturate and the overflow spreads, so cross density matches p
    counts = []
    for seed in range(5):
        G, P = sbm(SBMSpec((30, 30), 0.4, 0.4, seed=seed, boundary_size=3))
        counts.append(np.sum(P.block_of[G.tails] != P.block_of[G.heads]))
    assert np.mean(counts) == pytest.approx(0.4 * 2 * 900, rel=0.05)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        fixture("nope")


def test_regular_fixture_degrees():
    for n, d in [(8, 2), (8, 3), (10, 4)]:
        G = fixture("regular", n=n, d=d).graph
        assert np.all(G.adjacency.sum(axis=1) == d)
    with pytest.raises(ValueError):
        fixture("regular", n=7, d=3)


def test_corollary_pair_witness():
    fx = fixture("corollary_pair")
    strat = stratify_arcs(fx.graph, fx.partition)
    a, b = fx.attributes["a"], fx.attributes["b"]
    assert collapse_decomposition(strat, a).r_in == pytest.approx(collapse_decomposition(strat, b).r_in, abs=1e-10)
    pa, pb = profile_scalar(strat, a).values(), profile_scalar(strat, b).values()
    assert max(abs(u - v) for u, v in zip(pa, pb) if u is not None and v is not None) > 0.1


def test_chain_sweep_order_and_jobs_agree():
    base = SBMSpec((10, 10), 0.5, 0.0, seed=9, boundary_size=2)
    params = SISParams(1.0, 1.0)
    serial = chain_sweep(base, [0.02, 0.2], params, replicates=2)
    parallel = chain_sweep(base, [0.02, 0.2], params, replicates=2, jobs=2)
    assert [(r.q_between, r.replicate) for r in serial.records] == [(0.02, 0), (0.02, 1), (0.2, 0), (0.2, 1)]
    summary = serial.summary()
    assert [row["q_between"] for row in summary] == [0.02, 0.2]
    assert all(0 <= row["joint_fraction"] <= row["dominance_fraction"] for row in summary)
    assert parallel.records == serial.records
