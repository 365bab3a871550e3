"""Newman assortativity (scalar and categorical), directed modularity and
interior-boundary profiles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateMarginals, EmptyGraph, IdentityViolation, PartitionSizeMismatch, ZeroDenominator
from .graph import Graph
from .stratify import Partition, Stratification

EMPTY_STRATUM = "empty_stratum"
ZERO_VARIANCE = "zero_variance"
ZERO_DENOMINATOR = "zero_denominator"

ZERO_REL = 1e-14
RANGE_SLACK = 1e-12


@dataclass(frozen=True)
class Undefined:
    """A coefficient that does not exist for this input, with the reason why."""

    reason: str

    def __bool__(self):
        return False



def is_defined(value) -> bool:
    return not isinstance(value, Undefined)


def _checked(r: float) -> float:
    if not -1.0 - RANGE_SLACK <= r <= 1.0 + RANGE_SLACK:
        raise IdentityViolation(f"correlation {r!r} outside [-1, 1]")
    return float(r)


def _scale(*arrays) -> float:
    s = max((float(np.max(np.abs(a))) for a in arrays if len(a)), default=0.0)
    return s if s > 0 else 1.0


def weighted_moments(X: np.ndarray, Y: np.ndarray, w: np.ndarray):
    """Two-pass weighted means, variances and covariance of paired samples."""
    W = w.sum()
    mx = np.dot(w, X) / W
    my = np.dot(w, Y) / W
    dx = X - mx
    dy = Y - my
    vx = np.dot(w, dx * dx) / W
    vy = np.dot(w, dy * dy) / W
    cxy = np.dot(w, dx * dy) / W
    return mx, my, vx, vy, cxy


def pair_correlation(X, Y, w=None):
    """Weighted Pearson correlation of ``(X[e], Y[e])``; :class:`Undefined` if degenerate."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    w = np.ones(len(X)) if w is None else np.asarray(w, dtype=float)
    if len(X) == 0 or w.sum() <= 0:
        return Undefined(EMPTY_STRATUM)
    _, _, vx, vy, cxy = weighted_moments(X, Y, w)
    thr = ZERO_REL * _scale(X, Y) ** 2
    if vx <= thr or vy <= thr:
        return Undefined(ZERO_VARIANCE)
    return _checked(cxy / np.sqrt(vx * vy))


def _attribute(G: Graph, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (G.n,):
        raise PartitionSizeMismatch(f"attribute has shape {x.shape}, graph has {G.n} nodes")
    return x


def rho_scalar(G: Graph, x, form: str = "adjacency"):
    """Scalar assortativity of ``x``.

    ``form="adjacency"`` uses the strength-weighted means and the centred
    quadratic form of ``A``; for undirected graphs this is the modularity-matrix
    expression (``A - k k^T / 2m`` annihilates constants).  ``form="pearson"``
    correlates endpoint values over the weighted arc list.
    """
    if G.num_arcs == 0:
        raise EmptyGraph("assortativity of a graph with no arcs")
    x = _attribute(G, x)
    if form == "pearson":
        t, h, w, _ = G.oriented
        return pair_correlation(x[t], x[h], w)
    if form != "adjacency":
        raise ValueError(f"unknown form {form!r}")
    A = G.adjacency
    kout = A.sum(axis=1)
    kin = A.sum(axis=0)
    W = kout.sum()
    mu_out = kout @ x / W
    mu_in = kin @ x / W
    yo = x - mu_out
    yi = x - mu_in
    var_out = kout @ (yo * yo) / W
    var_in = kin @ (yi * yi) / W
    thr = ZERO_REL * _scale(x) ** 2
    if var_out <= thr or var_in <= thr:
        return Undefined(ZERO_VARIANCE)
    cov = yo @ A @ yi / W
    return _checked(cov / np.sqrt(var_out * var_in))


@dataclass(frozen=True)
class MixingMatrix:
    e: np.ndarray
    a: np.ndarray
    b: np.ndarray


def _labels(x, n: int) -> tuple[np.ndarray, int]:
    lab = np.asarray(x)
    if lab.shape != (n,):
        raise PartitionSizeMismatch(f"labels have shape {lab.shape}, expected ({n},)")
    lab = lab.astype(np.int64)
    if len(lab) and lab.min() < 0:
        raise ValueError("labels must be nonnegative integers")
    return lab, int(lab.max()) + 1 if len(lab) else 0


def mixing_matrix(tails, heads, weights, labels, K: int) -> MixingMatrix:
    e = np.zeros((K, K))
    np.add.at(e, (labels[tails], labels[heads]), weights)
    e /= e.sum()
    return MixingMatrix(e, e.sum(axis=1), e.sum(axis=0))


def mixing_coefficient(mm: MixingMatrix):
    ab = float(mm.a @ mm.b)
    denom = 1.0 - ab
    if denom <= ZERO_REL:
        return Undefined(ZERO_DENOMINATOR)
    return _checked((np.trace(mm.e) - ab) / denom)


def rho_categorical(G: Graph, x, K: int | None = None):
    """Mixing-matrix assortativity; returns ``(coefficient, MixingMatrix)``."""
    if G.num_arcs == 0:
        raise EmptyGraph("assortativity of a graph with no arcs")
    lab, k_seen = _labels(x, G.n)
    t, h, w, _ = G.oriented
    mm = mixing_matrix(t, h, w, lab, K or k_seen)
    return mixing_coefficient(mm), mm


def directed_modularity(G: Graph, P: Partition, gamma: float = 1.0) -> float:
    """Leicht-Newman modularity; on undirected graphs this is Newman-Girvan with ``2m``."""
    if gamma <= 0:
        raise ValueError("resolution gamma must be positive")
    if P.n != G.n:
        raise PartitionSizeMismatch(f"partition covers {P.n} nodes, graph has {G.n}")
    t, h, w, _ = G.oriented
    W = w.sum()
    if W <= 0:
        raise EmptyGraph("modularity of a graph with no arcs")
    b = P.block_of
    inside = w[b[t] == b[h]].sum()
    kout_block = np.bincount(b[t], weights=w, minlength=P.K)
    kin_block = np.bincount(b[h], weights=w, minlength=P.K)
    return float((inside - gamma * kout_block @ kin_block / W) / W)


def rho_modularity_consistency(G: Graph, P: Partition, tol: float = 1e-10) -> tuple[float, float, float]:
    """``(rho, Q, 1 - sum a_p b_p)`` for the labelling induced by ``P``; checks ``rho = Q / denom``."""
    rho, mm = rho_categorical(G, P.block_of, P.K)
    denom = 1.0 - float(mm.a @ mm.b)
    if not is_defined(rho):
        raise ZeroDenominator("1 - sum a_p b_p vanishes; assortativity undefined")
    Q = directed_modularity(G, P, 1.0)
    if abs(rho - Q / denom) > tol:
        raise IdentityViolation(f"rho={rho!r} but Q/denom={Q / denom!r}")
    return rho, Q, denom


def multipartite_rho(a: Sequence[float], tol: float = 1e-9) -> float:
    """Closed-form assortativity of a multipartite graph with consistent labels."""
    a = np.asarray(a, dtype=float)
    if np.any(a < 0) or abs(a.sum() - 1.0) > tol:
        raise ValueError("edge-end fractions must be nonnegative and sum to 1")
    s2 = float(a @ a)
    if 1.0 - s2 <= ZERO_REL:
        raise DegenerateMarginals("all edge ends lie in a single part")
    return -s2 / (1.0 - s2)


@dataclass(frozen=True)
class StratumCoefficient:
    stratum: str
    value: float | None
    reason: str | None
    mass: float
    count: int

    @property
    def defined(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class AssortProfile:
    kind: str  # "scalar" or "categorical"
    entries: tuple[StratumCoefficient, ...]

    def __getitem__(self, stratum: str) -> StratumCoefficient:
        for e in self.entries:
            if e.stratum == stratum:
                return e
        raise KeyError(stratum)

    def values(self) -> list[float | None]:
        return [e.value for e in self.entries]


def _entry(name, value, mass, count) -> StratumCoefficient:
    if isinstance(value, Undefined):
        return StratumCoefficient(name, None, value.reason, mass, count)
    return StratumCoefficient(name, float(value), None, mass, count)


def _stratum_scalar(t, h, w, x, n):
    # type-restricted adjacency form: marginal moments from type strengths
    m_T = w.sum()
    kout = np.bincount(t, weights=w, minlength=n)
    kin = np.bincount(h, weights=w, minlength=n)
    mu_out = kout @ x / m_T
    mu_in = kin @ x / m_T
    var_out = kout @ (x - mu_out) ** 2 / m_T
    var_in = kin @ (x - mu_in) ** 2 / m_T
    thr = ZERO_REL * _scale(x[t], x[h]) ** 2
    if var_out <= thr or var_in <= thr:
        return Undefined(ZERO_VARIANCE)
    cov = np.dot(w, (x[t] - mu_out) * (x[h] - mu_in)) / m_T
    return _checked(cov / np.sqrt(var_out * var_in))


def profile_scalar(strat: Stratification, x, unit_weights: bool = False) -> AssortProfile:
    """Per-stratum scalar assortativity.  ``unit_weights`` counts arcs instead of weighing them."""
    x = _attribute(strat.graph, x)
    entries = []
    for i, name in enumerate(strat.names):
        t, h, w = strat.sample(name, unit_weights)
        mass = float(strat.arc_masses[i]) if not unit_weights else float(len(t))
        if len(t) == 0:
            value = Undefined(EMPTY_STRATUM)
        else:
            value = _stratum_scalar(t, h, w, x, strat.graph.n)
        entries.append(_entry(name, value, mass, int(strat.counts[i])))
    return AssortProfile("scalar", tuple(entries))


def profile_categorical(strat: Stratification, x, K: int | None = None) -> AssortProfile:
    lab, k_seen = _labels(x, strat.graph.n)
    K = K or k_seen
    entries = []
    for i, name in enumerate(strat.names):
        t, h, w = strat.sample(name)
        if len(t) == 0:
            value = Undefined(EMPTY_STRATUM)
        else:
            value = mixing_coefficient(mixing_matrix(t, h, w, lab, K))
        entries.append(_entry(name, value, float(strat.arc_masses[i]), int(strat.counts[i])))
    return AssortProfile("categorical", tuple(entries))
