"""Approach of E_n^lambda to its large-n limit, with a fitted log-log slope.

Writes columns lambda, n, entropy, limit, deviation.
"""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from orthoentropy.bench import estimate_slope
from orthoentropy.gegenbauer import asymptotic_constant, entropy_gegenbauer


@dataclass(frozen=True)
class Config:
    lambdas: tuple[float, ...] = (1.0, 1.5, 2.0, 3.0, 5.5)
    ns: tuple[int, ...] = (25, 50, 100, 200, 400)
    epsilon: float = 1e-8


def run(cfg: Config) -> list[tuple]:
    rows = []
    for lam in cfg.lambdas:
        limit = asymptotic_constant(lam)
        for n in cfg.ns:
            E = entropy_gegenbauer(lam, n, epsilon=cfg.epsilon).value
            rows.append((lam, n, E, limit, abs(E - limit)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", type=float, nargs="+", default=list(Config.lambdas))
    ap.add_argument("--ns", type=int, nargs="+", default=list(Config.ns))
    ap.add_argument("--out", type=Path, default=Path("results/asymptotic_approach.csv"))
    args = ap.parse_args()
    cfg = Config(tuple(args.lambdas), tuple(args.ns))
    rows = run(cfg)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("lambda", "n", "entropy", "limit", "deviation"))
        w.writerows(rows)
    for lam in cfg.lambdas:
        if float(lam).is_integer():
            print(f"lambda={lam}: slope {estimate_slope(lam, cfg.ns):.3f}")
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
