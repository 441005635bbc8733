# Checks pi_x = (1 - alpha)/n * z_xx * r_x on random graphs and prints the worst gap.

import argparse

import numpy as np

from linkbuild.experiments import random_digraph
from linkbuild.surfer import SurferParams, pagerank, surfer_metrics


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--graphs", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = {}
    for idx in range(args.graphs):
        alpha = (0.5, 0.85, 0.95)[idx % 3]
        n = int(rng.integers(2, args.max_n + 1))
        g = random_digraph(rng, n, (0.1, 0.3, 0.5)[idx % 3])
        x = int(rng.integers(n))
        gap = abs(pagerank(g, SurferParams(alpha=alpha))[x] - surfer_metrics(g, x, alpha).pi_x)
        worst[alpha] = max(worst.get(alpha, 0.0), gap)
    for alpha, gap in sorted(worst.items()):
        print(f"alpha={alpha}: max gap {gap:.3e}")


if __name__ == "__main__":
    main()
