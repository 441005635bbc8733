"""Naive strategy against linking every sink on cycle-versus-sink graphs.

    python scripts/run_naive_sweep.py --out naive_sweep.csv
"""

import argparse

from linkbuild.experiments import theorem1_rows, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--u", type=int, nargs="+", default=[50, 100, 150, 200])
    ap.add_argument("--k", type=int, nargs="+", default=[50])
    ap.add_argument("--delta", type=float, default=0.01)
    ap.add_argument("--alpha", type=float, default=0.85)
    ap.add_argument("--clique-degree", type=int, default=8)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = theorem1_rows(args.u, args.k, args.delta, args.alpha, args.clique_degree)
    text = write_csv(rows)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    for r in rows:
        print(f"u={r['u']:4d} k={r['k']:3d}  ratio {r['ratio_empirical']:.4f}  "
              f"closed form {r['ratio_closed_form']:.4f}  bound {r['bound']:.4f}")


if __name__ == "__main__":
    main()
