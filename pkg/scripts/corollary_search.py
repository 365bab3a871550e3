"""Search small integer attributes on the directed two-triangle bridge for pairs
with equal pooled intra-group assortativity but different profiles."""

import argparse
import itertools

import numpy as np

from ibprofile.assort import profile_scalar
from ibprofile.collapse import collapse_decomposition
from ibprofile.genlab import fixture
from ibprofile.stratify import stratify_arcs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--min-gap", type=float, default=0.1)
    ap.add_argument("--limit", type=int, default=10)
    args = ap.parse_args(argv)

    fx = fixture("two_triangle_bridge_directed")
    strat = stratify_arcs(fx.graph, fx.partition)
    by_r = {}
    for vec in itertools.product(range(args.levels), repeat=fx.graph.n):
        a = np.array(vec, dtype=float)
        r = collapse_decomposition(strat, a).r_in
        if r is not None:
            by_r.setdefault(round(r, 10), []).append((vec, profile_scalar(strat, a).values()))

    shown = 0
    for r, group in sorted(by_r.items()):
        for (va, pa), (vb, pb) in itertools.combinations(group, 2):
            gaps = [abs(x - y) for x, y in zip(pa, pb) if x is not None and y is not None]
            if gaps and max(gaps) > args.min_gap:
                print(f"r_in={r:+.4f}  a={va}  b={vb}  max component gap={max(gaps):.3f}")
                shown += 1
                break
        if shown >= args.limit:
            break
    print(f"{shown} witness pair(s) shown; strata order {strat.names}")


if __name__ == "__main__":
    main()
