"""Region labels and TISGM counts on a (theta, r) grid, in parallel.

    python3 scripts/phase_diagram.py --theta 0.05 3 300 --r 0.05 15 300 --jobs 8 --out grid.csv

Same CSV as ``pottssos scan``; prints a tally of (A, B, N) combinations,
including the ones the count table does not list.
"""
import argparse
import collections
import csv
import io

from pottssos.cli import scan_csv
from pottssos.tisgm import table_count

import numpy as np


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, nargs=3, default=(0.05, 3.0, 120))
    ap.add_argument("--r", type=float, nargs=3, default=(0.05, 15.0, 120))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    th = np.linspace(args.theta[0], args.theta[1], int(args.theta[2]))
    rs = np.linspace(args.r[0], args.r[1], int(args.r[2]))
    text = scan_csv([(float(t), float(r)) for t in th for r in rs], args.jobs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    tally = collections.Counter()
    for row in csv.DictReader(io.StringIO(text)):
        if row["boundary_flag"] == "0":
            tally[(row["a_region"], row["b_region"], int(row["N"]))] += 1
    for (a, b, n), c in sorted(tally.items()):
        listed = table_count(a, b)
        note = "" if listed == n else f"  (table: {listed})"
        print(f"{a} {b} N={n}: {c}{note}")


if __name__ == "__main__":
    main()
