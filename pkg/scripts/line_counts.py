"""Number of TISGMs along the Potts, SOS and square lines, with the jump locations.

    python3 scripts/line_counts.py [--steps 3001] [--outdir data/]

Writes one CSV per line (param,theta,r,N) and prints where N changes.
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from pottssos.tisgm import enumerate_tisgm, line_point

RANGES = {"potts": (1.0, 12.0), "sos": (0.02, 1.0), "square": (0.5, 15.0)}


def scan(line, lo, hi, steps):
    rows = []
    for p in np.linspace(lo, hi, steps):
        theta, r = line_point(line, p)
        rows.append((p, theta, r, enumerate_tisgm(theta, r).N))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=3001)
    ap.add_argument("--outdir", type=Path, default=None)
    args = ap.parse_args()
    for line, (lo, hi) in RANGES.items():
        rows = scan(line, lo, hi, args.steps)
        jumps = [f"{0.5 * (a[0] + b[0]):.5f} ({a[3]}->{b[3]})" for a, b in zip(rows, rows[1:]) if a[3] != b[3]]
        print(f"{line:7s} N changes at: {', '.join(jumps) or 'none'}")
        if args.outdir:
            args.outdir.mkdir(parents=True, exist_ok=True)
            with open(args.outdir / f"counts_{line}.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["param", "theta", "r", "N"])
                w.writerows([f"{p:.12g}", f"{t:.12g}", f"{r:.12g}", n] for p, t, r, n in rows)


if __name__ == "__main__":
    main()
