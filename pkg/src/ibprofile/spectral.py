"""Random walks, directed conductance, Chung's directed Laplacian and the
truncated normalized-Laplacian proxy."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    Disconnected,
    IdentityViolation,
    NonConvergence,
    NotSymmetric,
    NotUndirected,
    TooLarge,
    TrivialSet,
    ZeroMass,
    ZeroStationaryMass,
)
from .graph import Graph, is_strongly_connected
from .stratify import Partition

log = logging.getLogger(__name__)

NONE, LAZY, TELEPORT = "none", "lazy", "teleport"
STATIONARY_MAX_ITERS = 1_000_000
PHI_FLOOR = 1e-15
CHEEGER_SLACK = 1e-8
CHEEGER_N_MAX = 18


@dataclass(frozen=True)
class WalkSpec:
    remedy: str = LAZY
    alpha: float = 0.85
    pi0: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.remedy not in (NONE, LAZY, TELEPORT):
            raise ValueError(f"unknown remedy {self.remedy!r}")
        if self.remedy == TELEPORT and not 0.0 <= self.alpha < 1.0:
            raise ValueError("teleport needs 0 <= alpha < 1")
        if self.pi0 is not None:
            p = np.asarray(self.pi0, dtype=float)
            if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
                raise ValueError("pi0 must be a probability vector")

    def target(self, n: int) -> np.ndarray:
        return np.full(n, 1.0 / n) if self.pi0 is None else np.asarray(self.pi0, dtype=float)


def default_walk(G: Graph) -> WalkSpec:
    """Lazy walk on strongly connected graphs, PageRank-style teleport otherwise."""
    return WalkSpec(LAZY) if is_strongly_connected(G) else WalkSpec(TELEPORT, 0.85)


def transition_matrix(G: Graph, spec: WalkSpec = WalkSpec(NONE)) -> np.ndarray:
    A = G.adjacency
    out = A.sum(axis=1)
    P = np.zeros_like(A)
    nz = out > 0
    P[nz] = A[nz] / out[nz, None]
    if spec.remedy == LAZY:
        P = 0.5 * (np.eye(G.n) + P)
    elif spec.remedy == TELEPORT:
        pi0 = spec.target(G.n)
        P[~nz] = pi0
        P = spec.alpha * P + (1.0 - spec.alpha) * pi0[None, :]
    return P


@dataclass
class StationaryResult:
    phi: np.ndarray
    residual: float
    iterations: int
    walk_used: WalkSpec | None = None


def stationary(P: np.ndarray, tol: float = 1e-12, max_iters: int = STATIONARY_MAX_ITERS,
               walk: WalkSpec | None = None) -> StationaryResult:
    """Left power iteration from the uniform vector until ``||phi P - phi||_1 <= tol``."""
    n = len(P)
    phi = np.full(n, 1.0 / n)
    for it in range(1, max_iters + 1):
        nxt = phi @ P
        if np.any(nxt < 0):
            log.warning("clamping %d negative stationary entries", int((nxt < 0).sum()))
            nxt = np.clip(nxt, 0.0, None)
        nxt /= nxt.sum()
        residual = float(np.abs(nxt @ P - nxt).sum())
        phi = nxt
        if residual <= tol:
            return StationaryResult(phi, residual, it, walk)
    result = StationaryResult(phi, residual, max_iters, walk)
    raise NonConvergence(f"stationary distribution not reached in {max_iters} steps",
                         best=result, residual=residual, iterations=max_iters)


def _mask(S, n: int) -> np.ndarray:
    S = np.asarray(S)
    if S.dtype == bool:
        if S.shape != (n,):
            raise ValueError("boolean subset mask has wrong length")
        return S
    m = np.zeros(n, dtype=bool)
    m[S.astype(np.int64)] = True
    return m


def directed_conductance(phi: np.ndarray, P: np.ndarray, S) -> float:
    """Stationary flow leaving ``S`` over the smaller of ``phi(S)`` and ``phi(V \\ S)``."""
    n = len(phi)
    m = _mask(S, n)
    if not m.any() or m.all():
        raise TrivialSet("subset must be nonempty and proper")
    mass = float(phi[m].sum())
    rest = float(phi[~m].sum())
    if mass <= 0 or rest <= 0:
        raise ZeroMass("subset or its complement has zero stationary mass")
    flow = float(phi[m] @ P[np.ix_(m, ~m)].sum(axis=1))
    return flow / min(mass, rest)


def block_conductances(phi: np.ndarray, P: np.ndarray, partition: Partition) -> list[float | None]:
    """``Phi(V_k)`` per block; ``None`` for a block that is all of ``V``."""
    out = []
    for k in range(partition.K):
        m = partition.block_of == k
        out.append(None if m.all() else directed_conductance(phi, P, m))
    return out


def cheeger_constant_bruteforce(phi: np.ndarray, P: np.ndarray, n_max: int = CHEEGER_N_MAX,
                                chunk: int = 1 << 14) -> float:
    """Minimum of ``Phi(S)`` over all ``2^n - 2`` proper subsets."""
    n = len(phi)
    if n > n_max:
        raise TooLarge(f"n={n} exceeds brute-force limit {n_max}")
    if n < 2:
        raise TrivialSet("need at least two nodes")
    F = phi[:, None] * P
    bits = 1 << np.arange(n)
    best = np.inf
    total = (1 << n) - 1
    for start in range(1, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        M = (codes[:, None] & bits) != 0
        Mf = M.astype(float)
        flow = np.einsum("su,uv,sv->s", Mf, F, 1.0 - Mf)
        mass = Mf @ phi
        denom = np.minimum(mass, 1.0 - mass)
        ok = denom > 0
        if ok.any():
            best = min(best, float((flow[ok] / denom[ok]).min()))
    return best


def chung_laplacian(phi: np.ndarray, P: np.ndarray) -> np.ndarray:
    low = np.flatnonzero(phi < PHI_FLOOR)
    if len(low):
        raise ZeroStationaryMass(int(low[0]), float(phi[low[0]]))
    s = np.sqrt(phi)
    M = s[:, None] * P / s[None, :]
    L = np.eye(len(phi)) - 0.5 * (M + M.T)
    return 0.5 * (L + L.T)


def eigen_sym(M: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric("matrix must be square")
    if M.size and np.max(np.abs(M - M.T)) > tol:
        raise NotSymmetric("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(0.5 * (M + M.T))
    return vals, vecs


@dataclass
class SpectralReport:
    walk: WalkSpec
    phi: np.ndarray
    eigenvalues: np.ndarray
    h_exact: float | None
    block_conductance: list[float | None] = field(default_factory=list)
    phi_max: float | None = None

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1])

    def sandwich(self) -> tuple[float, float, float] | None:
        if self.h_exact is None:
            return None
        return self.h_exact**2 / 2.0, self.lambda2, 2.0 * self.h_exact


def cheeger_check(G: Graph, spec: WalkSpec | None = None, n_max: int = CHEEGER_N_MAX,
                  partition: Partition | None = None, exact: bool = True,
                  tol: float = 1e-13) -> SpectralReport:
    """Spectrum of the directed Laplacian, brute-force ``h(G)`` when small, and block conductances.

    Raises :class:`IdentityViolation` if ``h^2/2 <= lambda_2 <= 2h`` fails.
    """
    spec = spec or default_walk(G)
    P = transition_matrix(G, spec)
    phi = stationary(P, tol, walk=spec).phi
    vals, _ = eigen_sym(chung_laplacian(phi, P))
    h = cheeger_constant_bruteforce(phi, P, n_max) if exact and G.n <= n_max else None
    if h is not None:
        lam2 = vals[1]
        if not (h * h / 2 - CHEEGER_SLACK <= lam2 <= 2 * h + CHEEGER_SLACK):
            raise IdentityViolation(f"Cheeger sandwich fails: h={h!r}, lambda_2={lam2!r}")
    report = SpectralReport(spec, phi, vals, h)
    if partition is not None:
        report.block_conductance = block_conductances(phi, P, partition)
        defined = [c for c in report.block_conductance if c is not None]
        report.phi_max = max(defined) if defined else None
    return report


def normalized_laplacian(G: Graph) -> np.ndarray:
    A = G.adjacency
    d = A.sum(axis=1)
    if np.any(d <= 0):
        raise Disconnected("isolated node: normalized Laplacian undefined")
    s = 1.0 / np.sqrt(d)
    return np.eye(G.n) - s[:, None] * A * s[None, :]


@dataclass
class ProxyResult:
    k: int
    s_k: np.ndarray
    s_inf: np.ndarray
    tail_bound: float
    eigenvalues: np.ndarray


def spectral_proxy(G: Graph, k: int) -> ProxyResult:
    """Truncated diagonal of the normalized-Laplacian pseudoinverse from ``k`` nontrivial eigenpairs.

    ``tail_bound`` is ``1 / lambda_{k+2}``; when ``k = n - 1`` the sum is
    complete and the bound is reported as 0.
    """
    if G.directed:
        raise NotUndirected("spectral proxy needs an undirected graph; use undirected_projection")
    n = G.n
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    vals, vecs = eigen_sym(normalized_laplacian(G))
    if n < 2 or vals[1] <= 1e-10:
        raise Disconnected("lambda_2 vanishes: graph is disconnected")
    contrib = vecs[:, 1:] ** 2 / vals[1:]  # column i-2 holds eigenpair i (1-based)
    s_inf = contrib.sum(axis=1)
    s_k = contrib[:, :k].sum(axis=1)
    tail = 1.0 / vals[k + 1] if k + 1 < n else 0.0
    return ProxyResult(k, s_k, s_inf, tail, vals)
