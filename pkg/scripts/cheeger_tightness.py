"""How close lambda_2 of the directed Laplacian sits to the two Cheeger bounds
on random strongly connected digraphs (lazy walk)."""

import argparse

import numpy as np

from ibprofile.graph import build_graph, is_strongly_connected
from ibprofile.spectral import LAZY, WalkSpec, cheeger_check


def random_digraph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return build_graph(n, edges, True)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=50)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    rows = []
    while len(rows) < args.graphs:
        G = random_digraph(rng, args.n, args.p)
        if not is_strongly_connected(G):
            continue
        lo, lam, hi = cheeger_check(G, WalkSpec(LAZY)).sandwich()
        rows.append((lam / hi, lo / lam))
    ratios = np.array(rows)
    print(f"lambda_2 / 2h     : min {ratios[:, 0].min():.3f}  median {np.median(ratios[:, 0]):.3f}  max {ratios[:, 0].max():.3f}")
    print(f"(h^2/2) / lambda_2: min {ratios[:, 1].min():.3f}  median {np.median(ratios[:, 1]):.3f}  max {ratios[:, 1].max():.3f}")


if __name__ == "__main__":
    main()
