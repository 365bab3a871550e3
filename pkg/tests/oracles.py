"""Independent reference computations used by the tests.

These deliberately avoid the library's code paths: plain Python loops over
explicit pair lists, dense double sums, and full eigendecompositions.
"""

import itertools
import math

import numpy as np


def pair_list(edges, directed):
    """Ordered endpoint pairs with weights; undirected edges appear both ways."""
    pairs = []
    for e in edges:
        u, v = e[0], e[1]
        w = e[2] if len(e) > 2 else 1.0
        pairs.append((u, v, w))
        if not directed and u != v:
            pairs.append((v, u, w))
    return pairs


def pearson_pairs(xs, ys, ws=None):
    """Streaming weighted Pearson correlation (Welford-style updates)."""
    if ws is None:
        ws = [1.0] * len(xs)
    W = mx = my = sxx = syy = sxy = 0.0
    for x, y, w in zip(xs, ys, ws):
        W += w
        dx = x - mx
        mx += w * dx / W
        my_old = my
        my += w * (y - my) / W
        sxx += w * dx * (x - mx)
        syy += w * (y - my_old) * (y - my)
        sxy += w * dx * (y - my)
    if sxx <= 1e-300 or syy <= 1e-300:
        return None
    return sxy / math.sqrt(sxx * syy)


def pooled_cov(xs, ys, ws):
    W = sum(ws)
    mx = sum(w * x for x, w in zip(xs, ws)) / W
    my = sum(w * y for y, w in zip(ys, ws)) / W
    return sum(w * (x - mx) * (y - my) for x, y, w in zip(xs, ys, ws)) / W


def modularity_double_loop(A, labels, gamma=1.0):
    n = len(A)
    W = sum(A[i][j] for i in range(n) for j in range(n))
    kout = [sum(A[i][j] for j in range(n)) for i in range(n)]
    kin = [sum(A[i][j] for i in range(n)) for j in range(n)]
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += A[i][j] - gamma * kout[i] * kin[j] / W
    return q / W


def roles_by_definition(n, edges, directed, block):
    nbrs = [set() for _ in range(n)]
    for e in edges:
        u, v = e[0], e[1]
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    return [any(block[w] != block[v] for w in nbrs[v]) for v in range(n)]


def stratum_of(u, v, boundary, directed):
    if directed:
        return {(False, False): "I->I", (False, True): "I->B", (True, False): "B->I",
                (True, True): "B->B"}[(boundary[u], boundary[v])]
    return ("II", "IB", "BB")[int(boundary[u]) + int(boundary[v])]


def conductance_subsets(phi, P):
    """Dict subset-tuple -> Phi(S) over all proper subsets, by explicit loops."""
    n = len(phi)
    out = {}
    for r in range(1, n):
        for S in itertools.combinations(range(n), r):
            inside = set(S)
            flow = sum(phi[u] * P[u][v] for u in inside for v in range(n) if v not in inside)
            mass = sum(phi[u] for u in inside)
            out[S] = flow / min(mass, 1 - mass)
    return out


def dense_spectral_radius(A):
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(A, dtype=float)))))
