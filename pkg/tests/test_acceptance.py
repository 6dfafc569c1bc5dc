"""Acceptance criteria 1-10, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines.
"""
from __future__ import annotations

import math
import time

import mpmath
import numpy as np
import pytest

from orthoentropy.bench import BenchConfig, bench_compare
from orthoentropy.gegenbauer import (
    GegenbauerParams,
    choose_truncation,
    entropy_gegenbauer,
    even_column_moments,
    explicit_m,
    explicit_m_exact,
    gegenbauer_coefficients,
    gegenbauer_moments,
    gegenbauer_partial_sums,
    truncation_bound,
)
from orthoentropy.oracle import reference_entropy_gegenbauer, sphere_quadrature_entropy
from orthoentropy.spherical import spherical_entropy, spherical_entropy_profile

DEGREES = (1, 5, 10, 50, 200)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def ent2_extended(n: int) -> float:
    with mpmath.workdps(50):
        n = mpmath.mpf(n)
        v = (mpmath.log((n + 3) / (3 * (n + 1)))
             - (n**3 - 5 * n**2 - 29 * n - 27) / ((n + 1) * (n + 2) * (n + 3))
             - ((n + 3) / (n + 1)) ** (n + 2) / (n + 2))
        return float(v)


def test_criterion_01_lambda_zero(report):
    start = time.perf_counter()
    results = [entropy_gegenbauer(0, n) for n in DEGREES]
    elapsed = time.perf_counter() - start
    err = max(abs(r.value - (math.log(2) - 1)) for r in results)
    terminates = all(r.truncation_N == n for r, n in zip(results, DEGREES))
    ok = err <= 1e-12 and terminates and elapsed <= 5
    report(1, ok, f"max error {err:.2e}, N = n for all: {terminates}, {elapsed:.2f} s")


def test_criterion_02_lambda_one(report):
    err = max(abs(entropy_gegenbauer(1, n).value + n / (n + 1)) for n in DEGREES)
    report(2, err <= 1e-12, f"max error {err:.2e}")


def test_criterion_03_lambda_two(report):
    start = time.perf_counter()
    err = max(abs(entropy_gegenbauer(2, n).value - ent2_extended(n)) for n in (10, 25, 50, 100))
    elapsed = time.perf_counter() - start
    report(3, err <= 1e-10 and elapsed <= 30, f"max error {err:.2e}, {elapsed:.2f} s")


def test_criterion_04_moment_oracle(report):
    worst = 0.0
    monotone = True
    for lam in (0.5, 1.5, 2.0, 3.7):
        p = GegenbauerParams(lam)
        coeffs = gegenbauer_coefficients(p)
        for n in range(1, 11):
            m = even_column_moments(coeffs, n, 20).values
            for k in range(1, 21):
                worst = max(worst, abs(m[k] - explicit_m(p, n, k)))
            exact = [abs(v) for v in explicit_m_exact(lam, n, 21)]
            # exact[i] is |m_{2(i+1),n}|
            monotone &= all(exact[k] <= exact[k - 1] for k in range(1, 21) if k > n + lam)
    report(4, worst <= 1e-9 and monotone, f"max deviation {worst:.2e}, tail monotone: {monotone}")


@pytest.mark.slow
def test_criterion_05_bound_validity(report):
    start = time.perf_counter()
    n = 200
    lines = []
    ok = True
    for lam in (1.5, 21.5):
        ref = reference_entropy_gegenbauer(lam, n)
        lo = math.floor(n + lam) + 1
        hi = choose_truncation(lam, n, 1e-12).N0
        grid = np.unique(np.geomspace(lo, hi, 20).round().astype(int))
        sums = gegenbauer_partial_sums(lam, n, int(grid[-1]))
        # 4 ulps of |E_ref| cover the rounding of the reference itself
        slack = 4 * np.finfo(float).eps * abs(ref)
        ratios = []
        for N in grid:
            N = int(N)
            err = abs(sums[N - 2] - ref)  # sum through k = N - 1
            bound = truncation_bound(lam, n, N)
            ratios.append(err / bound)
            ok &= err <= bound + slack
        lines.append(f"lam={lam}: {grid.size} points, max err/bound {max(ratios):.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed <= 120
    report(5, ok, "; ".join(lines) + f", {elapsed:.1f} s")


def test_criterion_06_plan_contract(report):
    ok = True
    parts = []
    for eps in (1e-4, 1e-6, 1e-8):
        plan = choose_truncation(1.5, 200, eps)
        at = truncation_bound(1.5, 200, plan.N0)
        before = truncation_bound(1.5, 200, plan.N0 - 1)
        ok &= at <= eps < before and not plan.capped
        parts.append(f"eps={eps:g}: N0={plan.N0}")
    report(6, ok, ", ".join(parts))


def test_criterion_07_random_invariants(report):
    rng = np.random.default_rng(20240521)
    lams = -0.4 + 10.4 * (1.0 - rng.random(100))  # (-0.4, 10]
    ns = rng.integers(1, 101, size=100)
    worst_value = -math.inf
    worst_moment = 0.0
    for lam, n in zip(lams, ns):
        lam, n = float(lam), int(n)
        N = 2 * n + 64
        c, m = gegenbauer_moments(lam, n, N)
        worst_moment = max(worst_moment, float(np.abs(c).max()), float(np.abs(m).max()))
        worst_value = max(worst_value, entropy_gegenbauer(lam, n, N_override=N).value)
    ok = worst_value <= 0.0 and worst_moment <= 1.0 + 1e-12
    report(7, ok, f"100 draws, max entropy {worst_value:.3e}, max |moment| {worst_moment:.15f}")


def test_criterion_08_asymptotic_trend(report):
    limit = -1.0 - math.log(3.0)
    dev = [abs(entropy_gegenbauer(2, n).value - limit) for n in (50, 100, 200, 400)]
    ok = all(b < a for a, b in zip(dev, dev[1:]))
    report(8, ok, "deviations " + ", ".join(f"{d:.3e}" for d in dev))


@pytest.mark.slow
def test_criterion_09_spherical(report):
    e00 = abs(spherical_entropy(0, 0) - math.log(4 * math.pi))
    e10 = abs(spherical_entropy(1, 0) - (math.log(4 * math.pi) + 2 / 3 - math.log(3)))
    e11 = abs(spherical_entropy(1, 1) - (math.log(2 * math.pi / 3) + 5 / 3))
    closed = e00 <= 1e-12 and e10 <= 1e-10 and e11 <= 1e-10
    profile10 = spherical_entropy_profile(10)
    quad = max(abs(S - sphere_quadrature_entropy(10, int(m))) for m, S in profile10)
    start = time.perf_counter()
    profile200 = spherical_entropy_profile(200, epsilon=1e-6)
    elapsed = time.perf_counter() - start
    # decreasing in |m|: S rises with m on m <= -100 and falls on m >= 100
    ms, S = profile200[:, 0], profile200[:, 1]
    steps = np.concatenate((-np.diff(S[ms <= -100]), np.diff(S[ms >= 100])))
    ok = closed and quad <= 1e-6 and bool(np.all(steps < 0)) and elapsed <= 120
    report(9, ok, f"closed forms {max(e00, e10, e11):.1e}, l=10 vs quadrature {quad:.1e}, "
                  f"l=200 largest step for |m|>=100 {steps.max():.3e}, {elapsed:.1f} s")


@pytest.mark.slow
def test_criterion_10_cross_method(report):
    cells = bench_compare([2.0], [10, 25, 50, 100], ["series", "quad"], BenchConfig(reps=1))
    err = {(c.n, c.method): c.abs_error for c in cells}
    beats = all(err[(n, "series")] < err[(n, "quad")] for n in (10, 25, 50, 100))
    start = time.perf_counter()
    big = entropy_gegenbauer(2, 500)
    elapsed = time.perf_counter() - start
    ok = beats and elapsed < 60 and math.isfinite(big.value)
    worst = max(err[(n, "series")] for n in (10, 25, 50, 100))
    best_quad = min(err[(n, "quad")] for n in (10, 25, 50, 100))
    report(10, ok, f"series max error {worst:.1e} vs quadrature min error {best_quad:.1e}; "
                   f"n=500 series {elapsed:.2f} s")
