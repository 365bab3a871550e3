import math

import numpy as np
import pytest
from hypothesis import given

from ibprofile.errors import EmptyGraph, NegativeWeight, NodeIdOutOfRange
from ibprofile.genlab import fixture
from ibprofile.graph import build_graph, is_strongly_connected, spectral_radius, strengths, undirected_projection
from ibprofile.spectral import eigen_sym

from conftest import graphs_with_partition
from oracles import dense_spectral_radius


def test_build_single_arc():
    G = build_graph(2, [(0, 1, 1)], True)
    assert G.num_arcs == 1
    assert strengths(G).total_mass == 1


def test_parallel_arcs_merge():
    G = build_graph(2, [(0, 1, 1), (0, 1, 2)], True)
    assert G.edges() == [(0, 1, 3.0)]


def test_undirected_canonical_order():
    G = build_graph(3, [(1, 0, 1)], False)
    assert G.edges() == [(0, 1, 1.0)]
    s = strengths(G)
    assert s.out_strength.tolist() == [1, 1, 0]
    assert s.in_strength.tolist() == [1, 1, 0]


def test_zero_weight_dropped():
    assert build_graph(2, [(0, 1, 0.0)]).num_arcs == 0


@pytest.mark.parametrize("edge,exc", [((0, 1, -1.0), NegativeWeight), ((0, 2, 1.0), NodeIdOutOfRange)])
def test_build_errors(edge, exc):
    with pytest.raises(exc):
        build_graph(2, [edge])


def test_strengths_directed_cycle():
    s = strengths(fixture("dir_cycle", n=4).graph)
    assert s.out_strength.tolist() == [1, 1, 1, 1]
    assert s.in_strength.tolist() == [1, 1, 1, 1]
    assert s.total_mass == 4


def test_strengths_k22():
    s = strengths(fixture("k22").graph)
    assert s.out_strength.tolist() == [2, 2, 2, 2]
    assert s.total_mass == 4


def test_strengths_two_triangle_bridge():
    s = strengths(fixture("two_triangle_bridge").graph)
    assert s.out_strength.tolist() == [2, 2, 3, 3, 2, 2]
    assert s.total_mass == 7


def test_self_loop_counts_in_strength():
    s = strengths(build_graph(2, [(0, 0, 2.0), (0, 1, 1.0)], True))
    assert s.out_strength.tolist() == [3, 0]
    assert s.total_mass == 3


@given(graphs_with_partition())
def test_handshake(gp):
    G, _ = gp
    s = strengths(G)
    assert s.out_strength.sum() == s.in_strength.sum()


@pytest.mark.parametrize("n", [3, 5, 8])
def test_spectral_radius_cycle(n):
    assert spectral_radius(fixture("dir_cycle", n=n).graph) == pytest.approx(1.0, abs=1e-12)


def test_spectral_radius_complete():
    K4 = build_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)], False)
    assert spectral_radius(K4) == pytest.approx(3.0, abs=1e-12)


def test_spectral_radius_two_triangle_bridge():
    G = fixture("two_triangle_bridge").graph
    assert spectral_radius(G) == pytest.approx(1 + math.sqrt(2), abs=1e-8)
    assert spectral_radius(G) == pytest.approx(dense_spectral_radius(G.adjacency), abs=1e-8)


def test_spectral_radius_reducible():
    # a 3-cycle feeding a 2-cycle: rho = 1 from both components
    G = build_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 3)], True)
    assert spectral_radius(G) == pytest.approx(1.0, abs=1e-12)
    dag = build_graph(3, [(0, 1), (1, 2)], True)
    assert spectral_radius(dag) == 0.0


def test_spectral_radius_empty():
    with pytest.raises(EmptyGraph):
        spectral_radius(build_graph(3, []))


@given(graphs_with_partition(directed=False))
def test_spectral_radius_matches_symmetric_eigensolver(gp):
    G, _ = gp
    vals, _ = eigen_sym(G.adjacency)
    assert spectral_radius(G) == pytest.approx(np.max(np.abs(vals)), abs=1e-8 * max(1, np.max(np.abs(vals))))


@given(graphs_with_partition(directed=True))
def test_spectral_radius_matches_dense_directed(gp):
    G, _ = gp
    ref = dense_spectral_radius(G.adjacency)
    assert spectral_radius(G) == pytest.approx(ref, abs=1e-7 * max(1, ref))


def test_strong_connectivity():
    assert is_strongly_connected(fixture("dir_cycle", n=4).graph)
    assert not is_strongly_connected(build_graph(2, []))
    assert not is_strongly_connected(build_graph(3, [(0, 1), (1, 2)]))
    assert is_strongly_connected(fixture("two_triangle_bridge").graph)


def test_projection_rules():
    G = undirected_projection(build_graph(2, [(0, 1, 1), (1, 0, 2)]))
    assert not G.directed and G.edges() == [(0, 1, 3.0)]
    tri = undirected_projection(fixture("dir_cycle", n=3).graph)
    assert tri.edges() == [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]
    assert undirected_projection(build_graph(1, [(0, 0, 1)])).num_arcs == 0


@given(graphs_with_partition(directed=False))
def test_projection_doubles_symmetric_weights(gp):
    G, _ = gp
    sym = build_graph(G.n, [(u, v, w) for u, v, w in G.edges() for u, v in {(u, v), (v, u)}], True)
    proj = undirected_projection(sym)
    expected = [(u, v, 2 * w) for u, v, w in G.edges() if u != v]
    assert proj.edges() == expected
