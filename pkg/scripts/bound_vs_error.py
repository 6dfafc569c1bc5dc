"""Observed truncation error against the certified tail bound on a grid of N.

Writes columns lambda, n, N, abs_error, bound, ratio.
"""
from __future__ import annotations

import argparse
import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from orthoentropy.gegenbauer import choose_truncation, gegenbauer_partial_sums, truncation_bound
from orthoentropy.oracle import reference_entropy_gegenbauer


@dataclass(frozen=True)
class Config:
    lambdas: tuple[float, ...] = (1.5, 21.5)
    n: int = 200
    points: int = 40
    floor_epsilon: float = 1e-13  # grid ends where the bound reaches this


def run(cfg: Config) -> list[tuple]:
    rows = []
    for lam in cfg.lambdas:
        ref = reference_entropy_gegenbauer(lam, cfg.n)
        lo = math.floor(cfg.n + lam) + 1
        hi = choose_truncation(lam, cfg.n, cfg.floor_epsilon).N0
        grid = np.unique(np.geomspace(lo, hi, cfg.points).round().astype(int))
        sums = gegenbauer_partial_sums(lam, cfg.n, int(grid[-1]))
        for N in map(int, grid):
            err = abs(sums[N - 2] - ref)
            bound = truncation_bound(lam, cfg.n, N)
            rows.append((lam, cfg.n, N, err, bound, err / bound))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", type=float, nargs="+", default=list(Config.lambdas))
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--out", type=Path, default=Path("results/bound_vs_error.csv"))
    args = ap.parse_args()
    rows = run(Config(tuple(args.lambdas), args.n, args.points))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("lambda", "n", "N", "abs_error", "bound", "ratio"))
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}; max ratio {max(r[-1] for r in rows):.3f}")


if __name__ == "__main__":
    main()
