"""eta_i, 2 kappa gamma - 1 and the verdict of each measure on r = theta^2.

    python3 scripts/extremality_curves.py [--lo 0.01 --hi 20 --steps 2000] > curves.csv

Also prints the four threshold constants to stderr.
"""
import argparse
import csv
import sys

import numpy as np

from pottssos.extremality import THRESHOLD_NAMES, extremality_verdict, find_threshold, line_measure, square_line_roots


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=0.01)
    ap.add_argument("--hi", type=float, default=20.0)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args()
    for name in THRESHOLD_NAMES:
        print(f"{name} = {find_threshold(name).value:.12g}", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["theta", "measure", "y", "lambda_max", "eta", "kappa", "gamma", "U", "status"])
    for t in np.linspace(args.lo, args.hi, args.steps):
        for i in range(1, len(square_line_roots(t)) + 1):
            m = line_measure(t, i)
            v = extremality_verdict(m, t, t * t, measure_index=i)
            w.writerow([f"{t:.12g}", i, f"{m.y:.12g}", f"{v.lambda_max:.12g}", f"{v.eta:.12g}",
                        f"{v.kappa:.12g}", f"{v.gamma:.12g}", f"{v.two_kappa_gamma - 1:.12g}", v.status])


if __name__ == "__main__":
    main()
