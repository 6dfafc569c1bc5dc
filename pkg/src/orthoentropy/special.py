"""Log-gamma, digamma and signed log-Pochhammer kernels.

Everything works on the log scale so that the Gamma ratios appearing in the
Gegenbauer moment and bound formulas can be combined without overflow.
"""
from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061

# Bernoulli numbers B_2k / (2k) for the digamma asymptotic series.
_DIGAMMA_ASYMPT = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0.

    Upward recurrence to x >= 10, then the Stirling-type asymptotic series.
    """
    if not x > 0:
        raise ValueError(f"digamma requires x > 0, got {x!r}")
    shift = []
    while x < 10.0:
        shift.append(1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _DIGAMMA_ASYMPT:
        series += c * power
        power *= inv2
    value = math.log(x) - 0.5 / x - series
    return value - math.fsum(shift)


def digamma_integer(n: int) -> float:
    """psi(n) for a positive integer n, via psi(1) = -gamma and the harmonic sum."""
    if n < 1:
        raise ValueError(f"digamma_integer requires n >= 1, got {n}")
    return math.fsum([-EULER_GAMMA] + [1.0 / k for k in range(1, n)])


def digamma_half_integer(n: int) -> float:
    """psi(n + 1/2) for an integer n >= 0, ascending from psi(1/2) = -gamma - 2 ln 2."""
    if n < 0:
        raise ValueError(f"digamma_half_integer requires n >= 0, got {n}")
    terms = [-EULER_GAMMA, -2.0 * math.log(2.0)]
    terms.extend(2.0 / (2 * k - 1) for k in range(1, n + 1))
    return math.fsum(terms)


def _is_nonpositive_integer(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


def log_pochhammer_signed(a: float, k: int) -> tuple[float, int]:
    """Return (log|(a)_k|, sign((a)_k)) for the rising factorial (a)_k.

    The sign is 0 (and the log is -inf) when (a)_k vanishes, i.e. when `a` is a
    nonpositive integer and k > -a.
    """
    if k < 0:
        raise ValueError(f"Pochhammer length must be nonnegative, got {k}")
    if k == 0:
        return 0.0, 1
    if _is_nonpositive_integer(a):
        m = int(-a)
        if k > m:
            return -math.inf, 0
        # (-m)(-m+1)...(-m+k-1) = (-1)^k m!/(m-k)!
        return math.lgamma(m + 1) - math.lgamma(m - k + 1), (-1) ** k
    if k <= 16:
        logs = []
        neg = 0
        for i in range(k):
            t = a + i
            if t < 0:
                neg += 1
            logs.append(math.log(abs(t)))
        return math.fsum(logs), -1 if neg % 2 else 1
    if a > 0:
        return math.lgamma(a + k) - math.lgamma(a), 1
    # Negative non-integer a: math.lgamma returns log|Gamma|.
    neg = min(k, math.ceil(-a))
    return math.lgamma(a + k) - math.lgamma(a), -1 if neg % 2 else 1


def pochhammer(a: float, k: int) -> float:
    """(a)_k as a float (may overflow to +-inf for large arguments)."""
    log_mag, sign = log_pochhammer_signed(a, k)
    if sign == 0:
        return 0.0
    return sign * math.exp(log_mag)


def log_gamma_ratio_run(x0: float, y0: float, count: int, anchor: int = 2048) -> np.ndarray:
    """log Gamma(x0 + i) - log Gamma(y0 + i) for i = 0..count-1, with x0, y0 > 0.

    Accumulates log(x/y) increments and re-anchors on math.lgamma every
    `anchor` entries to keep the running sum from drifting.
    """
    out = np.empty(count)
    for start in range(0, count, anchor):
        stop = min(start + anchor, count)
        base = math.lgamma(x0 + start) - math.lgamma(y0 + start)
        i = np.arange(start, stop - 1, dtype=float)
        steps = np.log((x0 + i) / (y0 + i))
        out[start] = base
        if stop - start > 1:
            out[start + 1 : stop] = base + np.cumsum(steps)
    return out


def logsumexp(values) -> float:
    """log(sum(exp(values))) for a 1-d sequence of logs; -inf for an empty input."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return -math.inf
    peak = float(arr.max())
    if peak == -math.inf:
        return -math.inf
    return peak + math.log(float(np.exp(arr - peak).sum()))
