"""Series against quadrature and zero-potential evaluations: error and time per cell.

Writes the bench CSV (lambda, n, method, value, abs_error, seconds).
"""
from __future__ import annotations

import argparse
from pathlib import Path

from orthoentropy.bench import METHODS, BenchConfig, bench_compare, format_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", type=float, nargs="+", default=[2.0])
    ap.add_argument("--ns", type=int, nargs="+", default=[10, 25, 50, 100])
    ap.add_argument("--methods", nargs="+", default=list(METHODS))
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--quad-factor", type=int, default=50)
    ap.add_argument("--out", type=Path, default=Path("results/timing_benchmark.csv"))
    args = ap.parse_args()
    cfg = BenchConfig(reps=args.reps, quad_factor=args.quad_factor)
    cells = bench_compare(args.lambdas, args.ns, args.methods, cfg)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(format_csv(cells))
    for c in cells:
        print(f"lambda={c.lam:g} n={c.n:4d} {c.method:8s} error {c.abs_error:.2e}  {c.seconds:.3f} s")


if __name__ == "__main__":
    main()
