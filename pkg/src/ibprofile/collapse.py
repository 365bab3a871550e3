"""Law-of-total-covariance decomposition of pooled intra-group assortativity,
and the sufficient-condition checker for a negative B->I component."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assort import ZERO_REL, _scale, is_defined, pair_correlation, profile_scalar, weighted_moments
from .errors import (
    EmptyIntraGroupStrata,
    IdentityViolation,
    NoBtoIArcs,
    PartitionSizeMismatch,
    RoleMismatch,
)
from .graph import Graph
from .stratify import Partition, Stratification, intra_group_strata

WEIGHTED = "weighted"
COUNTS = "unweighted_counts"
STRICT_REL = 1e-12


def default_mode(G: Graph) -> str:
    return WEIGHTED if G.is_weighted() else COUNTS


def _mode(G: Graph, mode: str | None) -> str:
    mode = mode or default_mode(G)
    if mode not in (WEIGHTED, COUNTS):
        raise ValueError(f"mode must be {WEIGHTED!r} or {COUNTS!r}")
    return mode


@dataclass
class StratumMoments:
    pi: float
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float
    cov: float
    r: float | None


@dataclass
class CollapseReport:
    mode: str
    strata: dict[str, StratumMoments]
    cov_in: float
    cov_between: float
    sigma_x_in: float
    sigma_y_in: float
    r_in: float | None
    residual_cov: float
    residual_corr: float | None

    @property
    def pi(self) -> dict[str, float]:
        return {k: s.pi for k, s in self.strata.items()}


def _corr(cov, vx, vy, scale):
    thr = ZERO_REL * scale**2
    if vx <= thr or vy <= thr:
        return None
    return float(cov / np.sqrt(vx * vy))


def collapse_decomposition(strat: Stratification, x, mode: str | None = None) -> CollapseReport:
    """Split the pooled intra-group covariance into within-stratum and between-stratum parts.

    Pooled quantities are computed directly from the pooled sample, not
    from the pieces, so the reported residuals are a genuine check.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (strat.graph.n,):
        raise PartitionSizeMismatch("attribute length does not match graph")
    mode = _mode(strat.graph, mode)
    unit = mode == COUNTS
    samples = {s: strat.sample(s, unit) for s in intra_group_strata(strat.directed)}
    samples = {s: v for s, v in samples.items() if len(v[0])}
    if not samples:
        raise EmptyIntraGroupStrata("no intra-group arcs to aggregate")

    X_in = np.concatenate([x[t] for t, _, _ in samples.values()])
    Y_in = np.concatenate([x[h] for _, h, _ in samples.values()])
    w_in = np.concatenate([w for _, _, w in samples.values()])
    mx, my, vx, vy, cov_in = weighted_moments(X_in, Y_in, w_in)
    scale = _scale(X_in, Y_in)
    total = w_in.sum()

    moments = {}
    for s, (t, h, w) in samples.items():
        smx, smy, svx, svy, scov = weighted_moments(x[t], x[h], w)
        moments[s] = StratumMoments(
            pi=float(w.sum() / total), mu_x=float(smx), mu_y=float(smy),
            sigma_x=float(np.sqrt(svx)), sigma_y=float(np.sqrt(svy)), cov=float(scov),
            r=_corr(scov, svx, svy, scale),
        )
    within = sum(m.pi * m.cov for m in moments.values())
    between = sum(m.pi * (m.mu_x - mx) * (m.mu_y - my) for m in moments.values())
    residual_cov = float(cov_in - within - between)

    r_in = _corr(cov_in, vx, vy, scale)
    residual_corr = None
    if r_in is not None and all(m.r is not None for m in moments.values()):
        rebuilt = (sum(m.pi * m.sigma_x * m.sigma_y * m.r for m in moments.values()) + between)
        residual_corr = float(r_in - rebuilt / np.sqrt(vx * vy))
    return CollapseReport(mode, moments, float(cov_in), float(between), float(np.sqrt(vx)),
                          float(np.sqrt(vy)), r_in, residual_cov, residual_corr)


@dataclass
class Condition:
    holds: bool
    margin: float
    strict: bool = False
    detail: dict = field(default_factory=dict)


@dataclass
class SignConditionsReport:
    mode: str
    groups: list[int]
    mu_boundary: dict[int, float]
    mu_interior: dict[int, float]
    tail_means: dict[int, float]
    head_means: dict[int, float]
    pi: dict[int, float]
    cov_within: dict[int, float]
    global_tail_mean: float
    global_head_mean: float
    between_term: float
    conditions: dict[str, Condition]
    strictness: bool
    verdict: str  # "negative", "no_prediction" or "not_applicable"
    observed_r_bi: float | None
    observed_reason: str | None

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.conditions.values())


def sign_conditions(G: Graph, P: Partition, strat: Stratification, x, mode: str | None = None) -> SignConditionsReport:
    """Evaluate conditions (i)-(v) for a negative B->I coefficient, then observe it.

    Undirected graphs use the IB stratum oriented boundary -> interior.
    """
    if strat.graph is not G or strat.partition != P:
        raise RoleMismatch("stratification was not built from this graph and partition")
    x = np.asarray(x, dtype=float)
    if x.shape != (G.n,):
        raise PartitionSizeMismatch("attribute length does not match graph")
    mode = _mode(G, mode)
    unit = mode == COUNTS
    roles = strat.roles
    b = P.block_of
    t, h, w = strat.sample(strat.names[2] if G.directed else "IB", unit)
    if not G.directed:
        keep = roles.boundary[t]
        t, h, w = t[keep], h[keep], w[keep]
    if len(t) == 0:
        raise NoBtoIArcs("the B->I stratum is empty")
    scale = _scale(x)
    thr = STRICT_REL * scale
    thr2 = STRICT_REL * scale**2

    # (i) boundary dominance over groups having both roles
    mu_B, mu_I = {}, {}
    for k in range(P.K):
        bk, ik = roles.boundary_of(k), roles.interior_of(k)
        if len(bk) and len(ik):
            mu_B[k] = float(x[bk].mean())
            mu_I[k] = float(x[ik].mean())
    gaps = {k: mu_B[k] - mu_I[k] for k in mu_B}
    m1 = min(gaps.values()) if gaps else float("-inf")
    cond_i = Condition(m1 > thr, m1, detail={"gaps": gaps})

    # per-group B->I samples
    gk = b[t]
    groups = sorted(set(gk.tolist()))
    X, Y = x[t], x[h]
    M = w.sum()
    tail_means, head_means, pis, covs = {}, {}, {}, {}
    for k in groups:
        sel = gk == k
        mx, my, _, _, c = weighted_moments(X[sel], Y[sel], w[sel])
        tail_means[k], head_means[k] = float(mx), float(my)
        pis[k] = float(w[sel].sum() / M)
        covs[k] = float(c)
    gx, gy, vx, vy, _ = weighted_moments(X, Y, w)

    # (ii) endpoint means on B->I arcs
    m2 = min(min(tail_means[k] - mu_B[k], mu_I[k] - head_means[k]) for k in groups)
    cond_ii = Condition(m2 >= -thr, m2)
    # (iii) nondegenerate endpoint variances
    m3 = float(min(vx, vy))
    cond_iii = Condition(m3 > thr2, m3)
    # (iv) within-group covariances nonpositive
    m4 = -max(covs.values())
    strict_iv = any(-c > thr2 for c in covs.values())
    cond_iv = Condition(m4 >= -thr2, m4, strict=strict_iv, detail={"cov_within": covs})
    # (v) between-group mean term nonpositive
    between = float(sum(pis[k] * (tail_means[k] - gx) * (head_means[k] - gy) for k in groups))
    cond_v = Condition(-between >= -thr2, -between, strict=-between > thr2)

    conds = {"i": cond_i, "ii": cond_ii, "iii": cond_iii, "iv": cond_iv, "v": cond_v}
    strictness = cond_iv.strict or cond_v.strict
    if not cond_iii.holds:
        verdict = "not_applicable"
    elif all(c.holds for c in conds.values()) and strictness:
        verdict = "negative"
    else:
        verdict = "no_prediction"

    # observed coefficient comes from the profile machinery, not from the pieces above
    prof = profile_scalar(strat, x, unit_weights=unit)
    entry = prof[strat.names[2] if G.directed else "IB"]
    if G.directed:
        observed, reason = entry.value, entry.reason
    else:
        observed, reason = _undirected_bi(strat, x, unit)
    report = SignConditionsReport(
        mode, groups, mu_B, mu_I, tail_means, head_means, pis, covs, float(gx), float(gy),
        between, conds, strictness, verdict, observed, reason,
    )
    if verdict == "negative" and not (observed is not None and observed < 0):
        raise IdentityViolation(f"conditions hold strictly but observed r_BI={observed!r}")
    return report


def _undirected_bi(strat: Stratification, x, unit: bool):
    t, h, w = strat.sample("IB", unit)
    keep = strat.roles.boundary[t]
    r = pair_correlation(x[t[keep]], x[h[keep]], w[keep])
    return (float(r), None) if is_defined(r) else (None, r.reason)
