"""Cross-method benchmark: series vs quadrature vs zero-potential entropies.

Each cell reports the absolute error against the best available reference
(closed form for lam in {0, 1, 2}, otherwise the machine-eps series) and the
mean wall time over ``reps`` timed runs after one untimed warm-up.
"""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import gegenbauer as gg
from .oracle import quadrature_entropy, reference_entropy_gegenbauer, zero_potential_entropy

METHODS = ("series", "quad", "zeropot")
_ALIASES = {"quadrature": "quad", "zero-potential": "zeropot"}
CSV_COLUMNS = ("lambda", "n", "method", "value", "abs_error", "seconds")


@dataclass(frozen=True)
class BenchConfig:
    reps: int = 10
    quad_factor: int = 50  # rule order K = quad_factor * n for the quadrature methods
    epsilon: float = gg.DEFAULT_EPSILON
    workers: int = 1


@dataclass(frozen=True)
class BenchCell:
    lam: float
    n: int
    method: str
    value: float
    abs_error: float
    seconds: float  # nan when timing is disabled (parallel runs)

    def row(self) -> tuple:
        return (self.lam, self.n, self.method, self.value, self.abs_error, self.seconds)


def canonical_method(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in METHODS:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return name


def reference_value(lam: float, n: int) -> float:
    if lam in (0, 1, 2):
        return gg.closed_form_entropy(lam, n)
    return reference_entropy_gegenbauer(lam, n)


def _runner(lam: float, n: int, method: str, cfg: BenchConfig) -> Callable[[], float]:
    if method == "series":
        return lambda: gg.entropy_gegenbauer(lam, n, epsilon=cfg.epsilon).value
    coeffs = gg.gegenbauer_coefficients(lam)
    K = max(cfg.quad_factor * n, 2 * n, 1)
    if method == "quad":
        return lambda: quadrature_entropy(coeffs, n, K)
    return lambda: zero_potential_entropy(coeffs, n, K)


def time_call(fn: Callable[[], float], reps: int) -> tuple[float, float]:
    """(value, mean seconds) over ``reps`` runs after one warm-up call."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    value = fn()
    start = time.perf_counter()
    for _ in range(reps):
        fn()
    return value, (time.perf_counter() - start) / reps


def _cell(args) -> BenchCell:
    lam, n, method, cfg, ref, timed = args
    fn = _runner(lam, n, method, cfg)
    if timed:
        value, seconds = time_call(fn, cfg.reps)
    else:
        value, seconds = fn(), math.nan
    return BenchCell(lam, n, method, value, abs(value - ref), seconds)


def bench_compare(lambdas: Iterable[float], ns: Iterable[int], methods: Iterable[str] = METHODS,
                  config: Optional[BenchConfig] = None) -> list[BenchCell]:
    """One cell per (lam, n, method), in grid order."""
    cfg = config or BenchConfig()
    methods = [canonical_method(m) for m in methods]
    grid = [(float(lam), int(n)) for lam in lambdas for n in ns]
    refs = {key: reference_value(*key) for key in grid}
    timed = cfg.workers <= 1
    tasks = [(lam, n, meth, cfg, refs[(lam, n)], timed) for lam, n in grid for meth in methods]
    if timed:
        return [_cell(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_cell, tasks))


def format_csv(cells: Iterable[BenchCell], digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    fmt = lambda v: format(v, f".{digits}g")
    for c in cells:
        w.writerow([fmt(c.lam), c.n, c.method, fmt(c.value), fmt(c.abs_error), fmt(c.seconds)])
    return buf.getvalue()


# --- interpolation across lambda (benchmark-only strategy) -----------------

@dataclass(frozen=True)
class InterpolationCell:
    lam: float
    n: int
    interpolated: float
    series: float
    abs_error: float
    interp_seconds: float
    series_seconds: float


def interpolate_entropy(lam: float, n: int) -> float:
    """Cubic through the exact integer-lam entropies at lam +- 1/2 and lam +- 3/2."""
    frac = lam - math.floor(lam)
    if abs(frac - 0.5) > 1e-12 or lam < 1.5:
        raise ValueError(f"interpolation needs a half-integer lam >= 1.5, got {lam}")
    nodes = lam + np.array([-1.5, -0.5, 0.5, 1.5])
    values = [gg.entropy_gegenbauer(float(round(x)), n).value for x in nodes]
    coef = np.polynomial.polynomial.polyfit(nodes - lam, values, 3)
    return float(coef[0])


def bench_interpolation(lambdas: Iterable[float], n: int, epsilon: float = 1e-6,
                        reps: int = 3) -> list[InterpolationCell]:
    """Interpolated vs truncated-series E_n^lam at half-integer lam."""
    out = []
    for lam in lambdas:
        interp, t_i = time_call(lambda: interpolate_entropy(lam, n), reps)
        series, t_s = time_call(lambda: gg.entropy_gegenbauer(lam, n, epsilon=epsilon).value, reps)
        out.append(InterpolationCell(lam, n, interp, series, abs(interp - series), t_i, t_s))
    return out


def estimate_slope(lam: float, ns: Iterable[int]) -> float:
    """Least-squares slope of ln |E_n - E_0| against ln n (empirical approach rate)."""
    ns = np.asarray(list(ns), dtype=float)
    limit = gg.asymptotic_constant(lam)
    dev = np.array([abs(gg.entropy_gegenbauer(lam, int(n)).value - limit) for n in ns])
    return float(np.polyfit(np.log(ns), np.log(dev), 1)[0])


__all__ = [
    "BenchCell", "BenchConfig", "CSV_COLUMNS", "METHODS", "bench_compare", "bench_interpolation",
    "canonical_method", "estimate_slope", "format_csv", "interpolate_entropy", "reference_value", "time_call",
]
