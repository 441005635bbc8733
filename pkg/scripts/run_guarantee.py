"""Worst observed r-Greedy / optimum ratio over seeded random digraphs.

    python scripts/run_guarantee.py --instances 100 --seed 0
"""

import argparse
import sys

from linkbuild.experiments import guarantee_rows, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=0.85)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="per-instance CSV")
    args = ap.parse_args()

    rows, summary, bad = guarantee_rows(args.instances, args.max_n, args.k, args.alpha, args.seed)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(write_csv(rows))
    sys.stdout.write(write_csv([summary]))
    return 3 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
