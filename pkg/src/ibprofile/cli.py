"""Command-line interface: ``ibprofile <command> ...``.

Exit status is 0 on success, 2 when the result is valid but mathematically
undefined (e.g. a constant attribute), and 1 on errors.

SIS orientation: an arc ``u -> v`` in the edge list transmits infection
from ``u`` to ``v``.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import logging
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .assort import profile_categorical, profile_scalar, rho_categorical, rho_scalar
from .collapse import collapse_decomposition, sign_conditions
from .errors import IBProfileError
from .genlab import FIXTURES, SBMSpec, chain_sweep, fixture, sbm
from .graph import Graph, strengths, undirected_projection
from .io import (
    file_sha256,
    parse_attribute,
    parse_edge_list,
    parse_partition,
    write_edge_list,
    write_node_values,
)
from .report import coef, dumps
from .sis import SISParams, endemic_equilibrium, implication_chain, integrate
from .spectral import LAZY, TELEPORT, WalkSpec, cheeger_check, default_walk, spectral_proxy
from .stratify import classify_roles, participation_table, stratify_arcs

log = logging.getLogger("ibprofile")

OK, ERROR, UNDEFINED = 0, 1, 2
JOBS_ENV = "IBPROFILE_JOBS"
DEGENERATE = {"zero_variance", "zero_denominator"}


class Run:
    """Collects inputs and warnings for the report envelope."""

    def __init__(self, command: str):
        self.command = command
        self.inputs: list[dict] = []
        self.warnings: list[str] = []

    def track(self, path) -> str:
        self.inputs.append({"path": str(path), "sha256": file_sha256(path)})
        return path

    def envelope(self, payload: dict, timestamp: str | None) -> dict:
        return {
            "tool_version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "timestamp": timestamp,
            "payload": payload,
            "warnings": self.warnings,
        }


def _graph_and_partition(run: Run, args):
    G = parse_edge_list(run.track(args.graph))
    P, mapping = parse_partition(run.track(args.partition), G.n)
    return G, P, mapping


def _profile_dict(profile) -> dict:
    return {e.stratum: {**coef(e.value, e.reason), "mass": e.mass, "count": e.count} for e in profile.entries}


def cmd_profile(run: Run, args):
    G, P, mapping = _graph_and_partition(run, args)
    roles = classify_roles(G, P)
    strat = stratify_arcs(G, P, roles)
    parts = participation_table(G, P)
    payload = {
        "n": G.n,
        "directed": G.directed,
        "partition_labels": mapping,
        "roles": roles.labels(),
        "strata": {name: {"count": int(strat.counts[i]), "mass": float(strat.masses[i]),
                          "arc_mass": float(strat.arc_masses[i])} for i, name in enumerate(strat.names)},
        "participation": {d: [coef(v, "zero_strength") for v in vals] for d, vals in parts.items()},
    }
    status = OK
    if args.attribute or args.attribute_categorical:
        categorical = args.attribute_categorical is not None
        path = args.attribute_categorical if categorical else args.attribute
        x, labels = parse_attribute(run.track(path), G.n, categorical)
        if categorical:
            prof = profile_categorical(strat, x)
            glob = rho_categorical(G, x)[0] if G.num_arcs else None
            payload["attribute_labels"] = labels
        else:
            prof = profile_scalar(strat, x)
            glob = rho_scalar(G, x) if G.num_arcs else None
        payload["profile_kind"] = prof.kind
        payload["profile"] = _profile_dict(prof)
        payload["rho_global"] = coef(glob, "empty_graph")
        if any(e.reason in DEGENERATE for e in prof.entries):
            status = UNDEFINED
    return payload, status


def _scalar_attribute(run: Run, args, n):
    x, _ = parse_attribute(run.track(args.attribute), n)
    return x


def cmd_collapse(run: Run, args):
    G, P, _ = _graph_and_partition(run, args)
    x = _scalar_attribute(run, args, G.n)
    mode = {"weighted": "weighted", "counts": "unweighted_counts", None: None}[args.mode]
    rep = collapse_decomposition(stratify_arcs(G, P), x, mode)
    payload = {
        "mode": rep.mode,
        "strata": {k: {**vars(m), "r": coef(m.r, "zero_variance")} for k, m in rep.strata.items()},
        "cov_in": rep.cov_in,
        "cov_between": rep.cov_between,
        "sigma_x_in": rep.sigma_x_in,
        "sigma_y_in": rep.sigma_y_in,
        "r_in": coef(rep.r_in, "zero_variance"),
        "residual_cov": rep.residual_cov,
        "residual_corr": coef(rep.residual_corr, "undefined_correlation"),
    }
    return payload, OK if rep.r_in is not None else UNDEFINED


def cmd_signcheck(run: Run, args):
    G, P, _ = _graph_and_partition(run, args)
    x = _scalar_attribute(run, args, G.n)
    strat = stratify_arcs(G, P)
    rep = sign_conditions(G, P, strat, x)
    payload = {
        "mode": rep.mode,
        "groups": rep.groups,
        "mu_boundary": rep.mu_boundary,
        "mu_interior": rep.mu_interior,
        "tail_means": rep.tail_means,
        "head_means": rep.head_means,
        "pi": rep.pi,
        "cov_within": rep.cov_within,
        "global_tail_mean": rep.global_tail_mean,
        "global_head_mean": rep.global_head_mean,
        "between_term": rep.between_term,
        "conditions": {k: {"holds": c.holds, "margin": c.margin, "strict": c.strict}
                       for k, c in rep.conditions.items()},
        "strictness": rep.strictness,
        "verdict": rep.verdict,
        "observed_r_bi": coef(rep.observed_r_bi, rep.observed_reason),
    }
    return payload, UNDEFINED if rep.verdict == "not_applicable" else OK


def _walk(args, G: Graph) -> WalkSpec:
    if args.remedy is None:
        return default_walk(G)
    return WalkSpec(args.remedy, args.alpha)


def cmd_spectral(run: Run, args):
    G, P, _ = _graph_and_partition(run, args)
    spec = _walk(args, G)
    rep = cheeger_check(G, spec, partition=P, exact=args.cheeger_exact)
    if args.cheeger_exact and rep.h_exact is None:
        run.warnings.append(f"n={G.n} too large for brute-force Cheeger constant; omitted")
    sandwich = rep.sandwich()
    payload = {
        "walk": {"remedy": spec.remedy, "alpha": spec.alpha},
        "stationary": rep.phi,
        "eigenvalues": rep.eigenvalues,
        "lambda_2": rep.lambda2 if G.n > 1 else None,
        "h_exact": coef(rep.h_exact, "not_computed"),
        "cheeger_bounds": None if sandwich is None else
        {"lower_h2_over_2": sandwich[0], "lambda_2": sandwich[1], "upper_2h": sandwich[2]},
        "block_conductance": [coef(c, "whole_graph") for c in rep.block_conductance],
        "phi_max": coef(rep.phi_max, "no_proper_block"),
    }
    return payload, OK


def cmd_proxy(run: Run, args):
    G = parse_edge_list(run.track(args.graph))
    if G.directed:
        run.warnings.append("directed input: proxy evaluated on the undirected projection")
        G = undirected_projection(G)
    res = spectral_proxy(G, args.k)
    payload = {
        "k": res.k,
        "s_k": res.s_k,
        "s_inf": res.s_inf,
        "tail_bound": res.tail_bound,
        "max_tail": float(np.max(res.s_inf - res.s_k)),
        "eigenvalues": res.eigenvalues,
    }
    return payload, OK


def _eq_dict(eq) -> dict:
    return {
        "x_star": eq.x_star,
        "residual": eq.residual,
        "iterations": eq.iterations,
        "threshold_margin": eq.threshold_margin,
        "method": eq.method,
        "disease_free": eq.disease_free,
    }


def cmd_sis(run: Run, args):
    G = parse_edge_list(run.track(args.graph))
    if args.partition:
        parse_partition(run.track(args.partition), G.n)
    params = SISParams(args.beta, args.delta)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        eq = endemic_equilibrium(G, params, args.tol)
    run.warnings.extend(str(w.message) for w in caught)
    payload = {"equilibrium": _eq_dict(eq)}
    if args.integrate is not None:
        x0 = np.full(G.n, 0.5)
        traj = integrate(x0, params, G, args.integrate, args.dt)
        payload["trajectory"] = {
            "horizon": args.integrate,
            "dt": traj.dt,
            "samples": len(traj.times),
            "final_state": traj.final,
            "max_abs_diff_to_equilibrium": float(np.max(np.abs(traj.final - eq.x_star))),
        }
        if args.trajectory_csv:
            buf = _io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["t"] + [f"x{i}" for i in range(G.n)])
            for t, row in zip(traj.times, traj.states):
                w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in row])
            Path(args.trajectory_csv).write_text(buf.getvalue(), encoding="utf-8")
            payload["trajectory"]["csv"] = str(args.trajectory_csv)
    return payload, OK


def _chain_dict(rep) -> dict:
    sign = None
    if rep.sign_report is not None:
        sr = rep.sign_report
        sign = {"verdict": sr.verdict, "strictness": sr.strictness,
                "conditions": {k: {"holds": c.holds, "margin": c.margin, "strict": c.strict}
                               for k, c in sr.conditions.items()},
                "observed_r_bi": coef(sr.observed_r_bi, sr.observed_reason)}
    return {
        "walk": {"remedy": rep.walk.remedy, "alpha": rep.walk.alpha},
        "phi_per_block": [coef(c, "whole_graph") for c in rep.phi_per_block],
        "phi_max": coef(rep.phi_max, "no_proper_block"),
        "equilibrium": _eq_dict(rep.equilibrium),
        "dominance": [{"group": d.group, "gap": coef(d.gap, d.skipped), "dominant": d.dominant}
                      for d in rep.dominance],
        "profile": _profile_dict(rep.profile),
        "sign_conditions": sign,
        "sign_error": rep.sign_error,
        "low_conductance": rep.low_conductance,
        "dominance_all": rep.dominance_all,
        "premises_hold": rep.premises_hold,
        "r_bi": coef(rep.r_bi, "undefined"),
        "conclusion_holds": rep.conclusion_holds,
        "verdict": rep.verdict,
    }


def cmd_chain(run: Run, args):
    G, P, _ = _graph_and_partition(run, args)
    rep = implication_chain(G, P, SISParams(args.beta, args.delta),
                            conductance_threshold=args.conductance_threshold)
    return _chain_dict(rep), OK if rep.r_bi is not None else UNDEFINED


def _kv(tokens) -> dict[str, str]:
    out = {}
    for tok in tokens:
        for part in tok.split():
            if "=" not in part:
                raise argparse.ArgumentTypeError(f"expected key=value, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _truthy(v: str) -> bool:
    return v.lower() in ("1", "true", "yes", "directed")


def _sbm_spec(tokens) -> SBMSpec:
    kv = _kv(tokens)
    try:
        sizes = tuple(int(s) for s in kv.pop("sizes").split(","))
        spec = SBMSpec(
            sizes,
            float(kv.pop("p")),
            float(kv.pop("q", "0")),
            float(kv.pop("weight", "1")),
            _truthy(kv.pop("directed", "1")),
            int(kv.pop("seed", "0")),
            int(kv["boundary"]) if "boundary" in kv else None,
        )
    except KeyError as exc:
        raise IBProfileError(f"--sbm needs {exc.args[0]}=...") from None
    kv.pop("boundary", None)
    if kv:
        raise IBProfileError(f"unknown --sbm keys: {sorted(kv)}")
    return spec


def _fixture_params(tokens) -> dict:
    params = {}
    for k, v in _kv(tokens).items():
        if k == "sizes":
            params[k] = tuple(int(s) for s in v.split(","))
        elif k == "directed":
            params[k] = _truthy(v)
        elif k in ("n", "d", "seed", "boundary_size"):
            params[k] = int(v)
        else:
            params[k] = float(v)
    return params


def cmd_gen(run: Run, args):
    if args.fixture:
        fx = fixture(args.fixture, **_fixture_params(args.param or []))
        G, P, attrs = fx.graph, fx.partition, fx.attributes
        source = {"fixture": args.fixture, "params": _fixture_params(args.param or [])}
    else:
        spec = _sbm_spec(args.sbm)
        G, P = sbm(spec)
        attrs = {}
        source = {"sbm": {"block_sizes": list(spec.block_sizes), "p_within": spec.p_within,
                          "q_between": spec.q_between, "weight": spec.weight, "directed": spec.directed,
                          "seed": spec.seed, "boundary_size": spec.boundary_size}}
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    files = {"graph": f"{prefix}.edges", "partition": f"{prefix}.partition"}
    write_edge_list(G, files["graph"])
    write_node_values(P.block_of.tolist(), files["partition"])
    for name, vals in attrs.items():
        files[f"attribute_{name}"] = f"{prefix}.{name}.attr"
        write_node_values([float(v) for v in vals], files[f"attribute_{name}"])
    payload = {
        "source": source,
        "n": G.n,
        "arcs": G.num_arcs,
        "directed": G.directed,
        "total_mass": strengths(G).total_mass,
        "files": {k: {"path": v, "sha256": file_sha256(v)} for k, v in files.items()},
    }
    return payload, OK


def cmd_sweep(run: Run, args):
    base = _sbm_spec(args.sbm)
    q_values = [float(q) for q in args.q_list.split(",")]
    jobs = args.jobs or int(os.environ.get(JOBS_ENV, "1"))
    res = chain_sweep(base, q_values, SISParams(args.beta, args.delta), args.replicates, jobs)
    rows = [["q_between", "replicate", "phi_max", "min_gap", "dominance_all", "r_bi", "verdict"]]
    for r in res.records:
        rows.append([f"{r.q_between:.17g}", r.replicate, "" if r.phi_max is None else f"{r.phi_max:.17g}",
                     "" if r.min_gap is None else f"{r.min_gap:.17g}", int(r.dominance_all),
                     "" if r.r_bi is None else f"{r.r_bi:.17g}", r.verdict])
    payload = {"seed": res.seed, "summary": res.summary(),
               "records": [{"q_between": r.q_between, "replicate": r.replicate,
                            "phi_max": coef(r.phi_max, "no_proper_block"),
                            "min_gap": coef(r.min_gap, "no_group_with_both_roles"),
                            "dominance_all": r.dominance_all, "r_bi": coef(r.r_bi, "undefined"),
                            "verdict": r.verdict} for r in res.records]}
    if args.out_prefix:
        csv_path = Path(f"{args.out_prefix}.csv")
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        buf = _io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        csv_path.write_text(buf.getvalue(), encoding="utf-8")
        payload["csv"] = str(csv_path)
    return payload, OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ibprofile", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, partition=True):
        if graph:
            sp.add_argument("--graph", required=True)
        if partition:
            sp.add_argument("--partition", required=True)
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--timestamp", help="value recorded in the report envelope (default: null)")

    sp = sub.add_parser("profile", help="roles, strata, assortativity profile, participation")
    common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--attribute")
    g.add_argument("--attribute-categorical")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("collapse", help="profile-collapse decomposition with residuals")
    common(sp)
    sp.add_argument("--attribute", required=True)
    sp.add_argument("--mode", choices=["weighted", "counts"])
    sp.set_defaults(func=cmd_collapse)

    sp = sub.add_parser("signcheck", help="sufficient conditions for a negative B->I component")
    common(sp)
    sp.add_argument("--attribute", required=True)
    sp.set_defaults(func=cmd_signcheck)

    sp = sub.add_parser("spectral", help="directed Laplacian spectrum, conductances, Cheeger constant")
    common(sp)
    sp.add_argument("--remedy", choices=["none", LAZY, TELEPORT])
    sp.add_argument("--alpha", type=float, default=0.85)
    sp.add_argument("--cheeger-exact", action="store_true")
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("proxy", help="truncated spectral proxy with tail bound")
    common(sp, partition=False)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_proxy)

    sp = sub.add_parser("sis", help="SIS endemic equilibrium (arc u->v transmits u to v)")
    common(sp, partition=False)
    sp.add_argument("--partition")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--integrate", type=float, metavar="T")
    sp.add_argument("--dt", type=float)
    sp.add_argument("--trajectory-csv")
    sp.set_defaults(func=cmd_sis)

    sp = sub.add_parser("chain", help="conductance -> dominance -> signed profile on one instance")
    common(sp)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--conductance-threshold", type=float, default=0.05)
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("gen", help="write a fixture or SBM draw as edge-list + partition files")
    common(sp, graph=False, partition=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--fixture", choices=sorted(FIXTURES))
    g.add_argument("--sbm", nargs="+", metavar="KEY=VALUE")
    sp.add_argument("--param", nargs="+", metavar="KEY=VALUE", help="fixture parameters")
    sp.add_argument("--out-prefix", required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("sweep", help="implication chain over a q grid and replicates")
    common(sp, graph=False, partition=False)
    sp.add_argument("--sbm", nargs="+", required=True, metavar="KEY=VALUE")
    sp.add_argument("--q-list", required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--replicates", type=int, default=1)
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--out-prefix")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args.command)
    try:
        payload, status = args.func(run, args)
    except (IBProfileError, OSError, ValueError) as exc:
        print(f"ibprofile {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR
    text = dumps(run.envelope(payload, args.timestamp))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
