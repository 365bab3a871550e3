"""N-intertwined SIS dynamics on a directed graph and the boundary-dominance pipeline.

Orientation: a stored arc ``j -> i`` transmits from ``j`` to ``i``, so node
``i`` feels the pressure ``s_i = sum_j A[j, i] x_j`` (column sums of ``A``
weighted by ``x``).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .assort import AssortProfile, profile_scalar
from .collapse import SignConditionsReport, sign_conditions
from .errors import IBProfileError, InvarianceViolation, NonConvergence, NoBtoIArcs, StateOutOfRange
from .graph import Graph, is_strongly_connected, spectral_radius, strengths
from .spectral import WalkSpec, block_conductances, default_walk, stationary, transition_matrix
from .stratify import NodeRoles, Partition, classify_roles, stratify_arcs

log = logging.getLogger(__name__)

STATE_SLACK = 1e-9
FP_MAX_ITERS = 1_000_000
CONDUCTANCE_THRESHOLD = 0.05


@dataclass(frozen=True)
class SISParams:
    beta: float
    delta: float

    def __post_init__(self):
        if not (self.beta > 0 and self.delta > 0):
            raise ValueError("beta and delta must be positive")


def _check_state(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise StateOutOfRange(f"state has shape {x.shape}, expected ({n},)")
    if np.any(x < -STATE_SLACK) or np.any(x > 1 + STATE_SLACK):
        raise StateOutOfRange("state outside [0, 1]^n")
    return x


def sis_rhs(x, params: SISParams, G: Graph) -> np.ndarray:
    x = _check_state(x, G.n)
    s = G.adjacency.T @ x
    return -params.delta * x + (1.0 - x) * params.beta * s


def default_dt(G: Graph, params: SISParams) -> float:
    return 0.01 / (params.delta + params.beta * float(strengths(G).in_strength.max(initial=0.0)))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # one row per sample
    dt: float

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def integrate(x0, params: SISParams, G: Graph, horizon: float, dt: float | None = None,
              sample_every: int | None = None) -> Trajectory:
    """Classical RK4 on the SIS field.  States leaving the unit cube abort the run."""
    x = _check_state(x0, G.n).copy()
    dt = dt or default_dt(G, params)
    steps = max(1, int(np.ceil(horizon / dt)))
    dt = horizon / steps
    sample_every = sample_every or max(1, steps // 1000)
    AT = G.adjacency.T
    b, d = params.beta, params.delta

    def f(y):
        return -d * y + (1.0 - y) * b * (AT @ y)

    times, states = [0.0], [x.copy()]
    for step in range(1, steps + 1):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if np.any(x < -STATE_SLACK) or np.any(x > 1 + STATE_SLACK):
            bad = int(np.argmax(np.maximum(-x, x - 1)))
            raise InvarianceViolation(
                f"step {step} (t={step * dt:.6g}): x[{bad}]={x[bad]!r} left [0,1]; reduce dt={dt:.3g}")
        if step % sample_every == 0 or step == steps:
            times.append(step * dt)
            states.append(x.copy())
    return Trajectory(np.array(times), np.array(states), dt)


@dataclass
class EquilibriumResult:
    x_star: np.ndarray
    residual: float
    iterations: int
    threshold_margin: float
    method: str
    warnings: list[str] = field(default_factory=list)

    @property
    def disease_free(self) -> bool:
        return self.threshold_margin <= 0


def fixed_point_map(x: np.ndarray, params: SISParams, AT: np.ndarray) -> np.ndarray:
    s = params.beta * (AT @ x)
    return s / (params.delta + s)


def fixed_point_iterates(G: Graph, params: SISParams, x0, n_iter: int):
    """Yield successive undamped iterates ``x <- beta s / (delta + beta s)``."""
    AT = G.adjacency.T
    x = np.asarray(x0, dtype=float)
    for _ in range(n_iter):
        x = fixed_point_map(x, params, AT)
        yield x


def perron_start(G: Graph, eps: float = 1e-3) -> np.ndarray:
    """Small perturbation of the disease-free state along the Perron vector of ``A^T``.

    Above threshold the fixed-point map increases this vector entrywise, so
    the iterates from it rise monotonically to the endemic state.
    """
    AT = G.adjacency.T
    v = np.ones(G.n)
    S = AT + np.eye(G.n)
    for _ in range(10_000):
        nv = S @ v
        nv /= nv.max()
        if np.max(np.abs(nv - v)) < 1e-14:
            break
        v = nv
    return eps * nv


def residual_norm(x: np.ndarray, params: SISParams, G: Graph) -> float:
    return float(np.max(np.abs(-params.delta * x + (1 - x) * params.beta * (G.adjacency.T @ x)), initial=0.0))


def endemic_equilibrium(G: Graph, params: SISParams, tol: float = 1e-12, method: str = "fixed_point",
                        max_iters: int = FP_MAX_ITERS, horizon: float = 2000.0) -> EquilibriumResult:
    """Endemic equilibrium, or the zero vector at or below the epidemic threshold."""
    notes = []
    if not is_strongly_connected(G):
        msg = "graph is not strongly connected; equilibrium may not be unique"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    rho = spectral_radius(G) if G.num_arcs else 0.0
    margin = params.beta * rho / params.delta - 1.0
    AT = G.adjacency.T
    if margin <= 0:
        zero = np.zeros(G.n)
        return EquilibriumResult(zero, 0.0, 0, margin, method, notes)
    if method == "fixed_point":
        x = np.full(G.n, 0.5)
        theta = 1.0
        last_step = np.inf
        for it in range(1, max_iters + 1):
            nxt = (1 - theta) * x + theta * fixed_point_map(x, params, AT)
            step = float(np.max(np.abs(nxt - x)))
            if step > last_step and theta > 1 / 64:
                theta *= 0.5
            last_step = step
            x = nxt
            if step <= tol:
                res = float(np.max(np.abs(fixed_point_map(x, params, AT) - x)))
                return EquilibriumResult(x, res, it, margin, method, notes)
        raise NonConvergence("fixed-point iteration did not converge", best=x, residual=step,
                             iterations=max_iters)
    if method == "ode_limit":
        x = np.full(G.n, 0.5)
        chunk = 10.0 / params.delta
        t = 0.0
        while t < horizon:
            x = integrate(x, params, G, chunk).final
            t += chunk
            if residual_norm(x, params, G) <= tol:
                break
        else:
            raise NonConvergence("ODE did not settle within the horizon", best=x,
                                 residual=residual_norm(x, params, G))
        res = float(np.max(np.abs(fixed_point_map(x, params, AT) - x)))
        return EquilibriumResult(x, res, int(round(t / chunk)), margin, method, notes)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class GroupDominance:
    group: int
    mean_boundary: float | None
    mean_interior: float | None
    gap: float | None
    dominant: bool
    skipped: str | None = None


def boundary_dominance(G: Graph, P: Partition, roles: NodeRoles, x_star) -> list[GroupDominance]:
    x = np.asarray(x_star, dtype=float)
    out = []
    for k in range(P.K):
        bk, ik = roles.boundary_of(k), roles.interior_of(k)
        if not len(bk) or not len(ik):
            out.append(GroupDominance(k, None, None, None, False,
                                      "empty_boundary" if not len(bk) else "empty_interior"))
            continue
        mb, mi = float(x[bk].mean()), float(x[ik].mean())
        out.append(GroupDominance(k, mb, mi, mb - mi, mb - mi > 0))
    return out


@dataclass
class ChainReport:
    walk: WalkSpec
    phi_per_block: list[float | None]
    phi_max: float | None
    equilibrium: EquilibriumResult
    dominance: list[GroupDominance]
    profile: AssortProfile
    sign_report: SignConditionsReport | None
    sign_error: str | None
    low_conductance: bool
    dominance_all: bool
    premises_hold: bool
    r_bi: float | None
    conclusion_holds: bool
    verdict: str

    @property
    def min_gap(self) -> float | None:
        gaps = [d.gap for d in self.dominance if d.gap is not None]
        return min(gaps) if gaps else None


def implication_chain(G: Graph, P: Partition, params: SISParams, spec: WalkSpec | None = None,
                      conductance_threshold: float = CONDUCTANCE_THRESHOLD, tol: float = 1e-12) -> ChainReport:
    """Conductance -> boundary dominance -> sign of the B->I component, evaluated on one instance.

    The premises are checked empirically: every block conductance at most
    ``conductance_threshold`` and every group boundary-dominant.
    """
    spec = spec or default_walk(G)
    P_walk = transition_matrix(G, spec)
    phi = stationary(P_walk, tol, walk=spec).phi
    per_block = block_conductances(phi, P_walk, P)
    defined = [c for c in per_block if c is not None]
    phi_max = max(defined) if defined else None

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        eq = endemic_equilibrium(G, params, tol)
    roles = classify_roles(G, P)
    strat = stratify_arcs(G, P, roles)
    dom = boundary_dominance(G, P, roles, eq.x_star)
    profile = profile_scalar(strat, eq.x_star)

    sign_report, sign_error = None, None
    try:
        sign_report = sign_conditions(G, P, strat, eq.x_star, mode="weighted")
    except NoBtoIArcs as exc:
        sign_error = f"NoBtoIArcs: {exc}"
    except IBProfileError as exc:  # pragma: no cover - surfaced in the report
        sign_error = f"{type(exc).__name__}: {exc}"

    checked = [d for d in dom if d.skipped is None]
    dominance_all = bool(checked) and all(d.dominant for d in checked)
    low = phi_max is not None and phi_max <= conductance_threshold
    bi_name = strat.names[2] if G.directed else "IB"
    r_bi = profile[bi_name].value if G.directed else (sign_report.observed_r_bi if sign_report else None)
    premises = (not eq.disease_free) and low and dominance_all
    conclusion = r_bi is not None and r_bi < 0
    if eq.disease_free:
        verdict = "disease_free"
    elif not premises:
        verdict = "premises_fail"
    elif sign_error is not None and sign_error.startswith("NoBtoIArcs"):
        verdict = "no_BI_arcs"
    else:
        verdict = "conclusion_holds" if conclusion else "conclusion_fails"
    return ChainReport(spec, per_block, phi_max, eq, dom, profile, sign_report, sign_error,
                       low, dominance_all, premises, r_bi, conclusion, verdict)
