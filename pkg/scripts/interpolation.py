"""Cubic interpolation across integer lambda against the truncated series.

Writes columns lambda, n, interpolated, series, abs_error, interp_seconds, series_seconds.
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import astuple
from pathlib import Path

from orthoentropy.bench import bench_interpolation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", type=float, nargs="+", default=[1.5, 2.5, 3.5, 5.5, 10.5])
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--eps", type=float, default=1e-8)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--out", type=Path, default=Path("results/interpolation.csv"))
    args = ap.parse_args()
    cells = bench_interpolation(args.lambdas, args.n, args.eps, args.reps)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("lambda", "n", "interpolated", "series", "abs_error", "interp_seconds", "series_seconds"))
        w.writerows(astuple(c) for c in cells)
    for c in cells:
        print(f"lambda={c.lam}: |interp - series| = {c.abs_error:.3e}")


if __name__ == "__main__":
    main()
