"""r-Greedy against linking every shaded sink on sink-versus-sink graphs.

    python scripts/run_rgreedy_sweep.py --out rgreedy_sweep.csv
"""

import argparse

from linkbuild.experiments import theorem3_rows, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=int, nargs="+", default=[10, 50, 100, 200, 500])
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--alpha", type=float, default=0.85)
    ap.add_argument("--clique-degree", type=int, default=8)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = theorem3_rows(args.c, args.k, args.alpha, args.clique_degree)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(write_csv(rows))
    for r in rows:
        print(f"c={r['c']:4d}  choice {r['rgreedy_choice']:6s} ratio {r['ratio_empirical']:.4f}  "
              f"-> {r['bound']:.4f}")


if __name__ == "__main__":
    main()
