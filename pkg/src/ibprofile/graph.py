"""Directed weighted graphs and the quantities every other module reads off them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import EmptyGraph, NegativeWeight, NodeIdOutOfRange, NonConvergence

POWER_MAX_ITERS = 100_000


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted graph on nodes ``0..n-1``.

    Stored arcs are unique ``(tail, head)`` pairs with positive weight.  An
    undirected graph stores each edge once with ``tail <= head`` and is read
    as the symmetric matrix ``A[u, v] = A[v, u] = w``.
    """

    n: int
    tails: np.ndarray
    heads: np.ndarray
    weights: np.ndarray
    directed: bool = True

    @property
    def num_arcs(self) -> int:
        return len(self.tails)

    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(w)) for u, v, w in zip(self.tails, self.heads, self.weights)]

    @cached_property
    def oriented(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Arcs as ordered pairs with the stored-edge index each came from.

        Directed graphs return their arcs unchanged.  Undirected graphs
        return both orientations of every non-loop edge, so that sums over
        the result are sums over the entries of the symmetric matrix.
        """
        idx = np.arange(self.num_arcs)
        if self.directed:
            return self.tails, self.heads, self.weights, idx
        off = self.tails != self.heads
        tails = np.concatenate([self.tails, self.heads[off]])
        heads = np.concatenate([self.heads, self.tails[off]])
        weights = np.concatenate([self.weights, self.weights[off]])
        return tails, heads, weights, np.concatenate([idx, idx[off]])

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense matrix with ``A[i, j]`` the weight of arc ``i -> j``."""
        t, h, w, _ = self.oriented
        A = np.zeros((self.n, self.n))
        np.add.at(A, (t, h), w)
        A.setflags(write=False)
        return A

    def is_weighted(self) -> bool:
        return bool(np.any(self.weights != 1.0))


@dataclass(frozen=True)
class StrengthVectors:
    out_strength: np.ndarray
    in_strength: np.ndarray
    total_mass: float


def build_graph(n: int, edges: Iterable[tuple], directed: bool = True) -> Graph:
    """Validate, canonicalize and merge an edge list.

    Each edge is ``(tail, head)`` or ``(tail, head, weight)``.  Parallel
    entries are summed, zero weights dropped, and undirected edges stored
    with ``tail <= head``.
    """
    if n < 0:
        raise ValueError("node count must be nonnegative")
    merged: dict[tuple[int, int], float] = {}
    for e in edges:
        u, v = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        if not np.isfinite(w) or w < 0:
            raise NegativeWeight(f"arc ({u}, {v}) has weight {w!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise NodeIdOutOfRange(f"arc ({u}, {v}) outside 0..{n - 1}")
        if not directed and u > v:
            u, v = v, u
        merged[(u, v)] = merged.get((u, v), 0.0) + w
    keys = sorted(k for k, w in merged.items() if w > 0)
    tails = np.array([k[0] for k in keys], dtype=np.int64)
    heads = np.array([k[1] for k in keys], dtype=np.int64)
    weights = np.array([merged[k] for k in keys], dtype=float)
    for a in (tails, heads, weights):
        a.setflags(write=False)
    return Graph(n=n, tails=tails, heads=heads, weights=weights, directed=directed)


def strengths(G: Graph) -> StrengthVectors:
    t, h, w, _ = G.oriented
    out_s = np.bincount(t, weights=w, minlength=G.n).astype(float)
    in_s = np.bincount(h, weights=w, minlength=G.n).astype(float)
    total = float(w.sum())
    if not G.directed:
        total /= 2.0
    return StrengthVectors(out_s, in_s, total)


def _reachable(n: int, adj: list[list[int]], start: int) -> np.ndarray:
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return seen


def is_strongly_connected(G: Graph) -> bool:
    """Forward and backward reachability from node 0 both cover every node."""
    if G.n <= 1:
        return True
    fwd: list[list[int]] = [[] for _ in range(G.n)]
    bwd: list[list[int]] = [[] for _ in range(G.n)]
    t, h, _, _ = G.oriented
    for u, v in zip(t.tolist(), h.tolist()):
        fwd[u].append(v)
        bwd[v].append(u)
    return bool(_reachable(G.n, fwd, 0).all() and _reachable(G.n, bwd, 0).all())


def _perron_root(M: np.ndarray, tol: float, max_iters: int) -> float:
    # M irreducible and nonnegative.  Iterating M + I (primitive, same Perron
    # vector) avoids periodic oscillation; Collatz-Wielandt ratios bracket the root.
    k = len(M)
    if k == 1:
        return float(M[0, 0])
    S = M + np.eye(k)
    x = np.full(k, 1.0 / np.sqrt(k))
    lo = hi = 0.0
    for _ in range(max_iters):
        y = S @ x
        ratios = y / x
        lo, hi = ratios.min() - 1.0, ratios.max() - 1.0
        if hi - lo <= tol * max(1.0, hi):
            return float(0.5 * (lo + hi))
        x = y / np.linalg.norm(y)
    raise NonConvergence(f"power iteration did not converge in {max_iters} steps",
                         best=0.5 * (lo + hi), residual=hi - lo, iterations=max_iters)


def spectral_radius(G: Graph, tol: float = 1e-12, max_iters: int = POWER_MAX_ITERS) -> float:
    """Perron root of the adjacency matrix by power iteration.

    Reducible matrices are split into strongly connected components and the
    largest component root is returned, so the start vector stays positive
    in every block that is iterated.
    """
    if G.num_arcs == 0:
        raise EmptyGraph("spectral radius of a graph with no arcs")
    A = G.adjacency
    ncomp, labels = connected_components(csr_matrix(A), directed=True, connection="strong")
    best = 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        block = A[np.ix_(idx, idx)]
        if not block.any():
            continue
        best = max(best, _perron_root(block, tol, max_iters))
    return best


def undirected_projection(G: Graph) -> Graph:
    """Symmetrize: ``w'(u, v) = A[u, v] + A[v, u]`` with loops dropped.

    An undirected input is read as its symmetric matrix, so its projection
    carries doubled weights.
    """
    t, h, w, _ = G.oriented
    keep = t != h
    edges = zip(t[keep].tolist(), h[keep].tolist(), w[keep].tolist())
    return build_graph(G.n, edges, directed=False)
