"""Measure the ratio width / (max_degree * (treewidth + 1)) of the tree-to-carving conversion."""

import argparse
import random

from algtn import decomp as dc
from algtn import generators as gen


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", type=int, default=500)
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    worst, worst_graph = 0.0, None
    exact_gap = 0
    for _ in range(args.graphs):
        n = rng.randint(2, args.max_n)
        G = gen.random_simple_graph(rng, n) if rng.random() < 0.5 else gen.random_multigraph(rng, n, rng.randint(2, 5))
        td = dc.heuristic_tree_decomposition(G)
        cd = dc.carving_from_tree_decomposition(G, td)
        w = dc.carving_width(G, cd)
        delta = dc.max_degree(G)
        if not delta:
            continue
        ratio = w / (delta * (td.width + 1))
        if ratio > worst:
            worst, worst_graph = ratio, (n, G.number_of_edges(), delta, td.width, w)
        if n <= dc.EXACT_MAX_VERTICES:
            exact_gap = max(exact_gap, w - dc.exact_carving_width(G))
    print(f"graphs={args.graphs} C_CONV={dc.C_CONV} max_ratio={worst:.4f}")
    print("worst instance (n, m, max_degree, treewidth, width):", worst_graph)
    print(f"largest gap to exact width on small graphs: {exact_gap}")


if __name__ == "__main__":
    main()
