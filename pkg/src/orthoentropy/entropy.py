"""Mutual energy and entropy from the Chebyshev-moment series.

    I[lambda_n, nu_n] = ln 2 + 2 sum_k c_{k,n} m_{k,n} / k
    E_n = -2 ln(gamma_n / 2^n) + 4n sum_k c_{k,n} m_{k,n} / k

For symmetric measures only even k contribute and the truncation index N of
:func:`entropy_from_series` counts even terms: the sum runs over Chebyshev
indices 2, 4, ..., 2N.  Otherwise N is the largest Chebyshev index used.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .moments import ChebyshevMomentSequence, moments
from .oracle import gauss_rule
from .recurrence import RecurrenceCoefficients, log_leading_term, polynomial_and_derivative

LN2 = math.log(2.0)


class TruncationError(RuntimeError):
    """No admissible truncation index within the configured limits."""


@dataclass(frozen=True)
class EntropyResult:
    """Entropy in nats with the truncation used and its error certificate."""

    n: int
    value: float
    truncation_N: int
    bound: Optional[float]
    method: str
    elapsed: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "value": self.value,
            "N": self.truncation_N,
            "bound": self.bound,
            "method": self.method,
            "seconds": self.elapsed,
        }


@dataclass(frozen=True)
class RemainderCertificate:
    """4 M_n / (N + 1) with M_n estimated from a sampled maximum (not rigorous)."""

    M_n_estimate: float
    N: int
    bound: float
    estimate_quality: str = "sampled"


def mutual_energy(c: ChebyshevMomentSequence, m: ChebyshevMomentSequence, N: int) -> float:
    """ln 2 + 2 sum_{k=1}^N c_k m_k / k; N is a Chebyshev index."""
    if c.n != m.n:
        raise ValueError(f"moment sequences belong to different degrees ({c.n} vs {m.n})")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > c.N or N > m.N:
        raise ValueError(f"moments available through index {min(c.N, m.N)}, N={N} requested")
    if N == 0:
        return LN2
    k = np.arange(1, N + 1)
    return LN2 + 2.0 * math.fsum(c.full()[1 : N + 1] * m.full()[1 : N + 1] / k)


def _series_sum(c: np.ndarray, m: np.ndarray, step: int) -> float:
    """sum over stored indices i >= 1 of c_i m_i / (step * i)."""
    k = step * np.arange(1, c.size)
    return math.fsum(c[1:] * m[1:] / k)


def sample_M(coeffs: RecurrenceCoefficients, n: int, grid_size: Optional[int] = None,
             order: Optional[int] = None) -> float:
    """Sampled sup_x of the integral of |(p_n^2(x) - p_n^2(t)) / (x - t)| dmu(t)."""
    if n == 0:
        return 0.0
    grid_size = 4 * n + 64 if grid_size is None else grid_size
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    order = 4 * (n + 1) if order is None else order
    rule = gauss_rule(coeffs, order)
    i = np.arange(grid_size)
    x = np.cos(np.pi * (i + 0.5) / grid_size)
    px, dx = polynomial_and_derivative(coeffs, n, x)
    pt, _ = polynomial_and_derivative(coeffs, n, rule.nodes)
    Px, Pt = px * px, pt * pt
    diff = x[:, None] - rule.nodes[None, :]
    close = np.abs(diff) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (Px[:, None] - Pt[None, :]) / diff
    q = np.where(close, (2.0 * px * dx)[:, None], q)
    integrals = np.abs(q) @ rule.weights
    return float(integrals.max())


def generic_remainder_bound(coeffs: RecurrenceCoefficients, n: int, N: int,
                            grid_size: Optional[int] = None) -> RemainderCertificate:
    """Remainder estimate 4 M_n / (N + 1) for the series truncated at Chebyshev index N."""
    M = sample_M(coeffs, n, grid_size)
    return RemainderCertificate(M, N, 4.0 * M / (N + 1))


def generic_truncation(coeffs: RecurrenceCoefficients, n: int, epsilon: float,
                       M: Optional[float] = None) -> tuple[int, float]:
    """Chebyshev index N doubled from 2(n+1) until 4 M_n / (N+1) <= epsilon; cap 64(n+1)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    M = sample_M(coeffs, n) if M is None else M
    N = 2 * (n + 1)
    cap = 64 * (n + 1)
    while 4.0 * M / (N + 1) > epsilon:
        if N >= cap:
            raise TruncationError(f"sampled remainder {4.0 * M / (N + 1):.3e} still above epsilon={epsilon:g} "
                                  f"at the cap N={cap}; pass an explicit N")
        N = min(2 * N, cap)
    return N, 4.0 * M / (N + 1)


def entropy_from_series(coeffs: RecurrenceCoefficients, n: int, N: Optional[int] = None,
                        epsilon: Optional[float] = None, certify: bool = False) -> EntropyResult:
    """Entropy of p_n from recurrence coefficients alone.

    Give N (see the module docstring for its meaning) or a target epsilon for
    the sampled remainder estimate.  ``certify`` attaches that estimate to an
    explicit-N result as well.
    """
    start = time.perf_counter()
    if n < 0:
        raise ValueError("n must be nonnegative")
    if (N is None) == (epsilon is None):
        raise ValueError("give exactly one of N and epsilon")
    if n == 0:
        return EntropyResult(0, 0.0, 0, 0.0, "generic", time.perf_counter() - start)
    symmetric = coeffs.is_symmetric
    bound = None
    if epsilon is not None:
        N_generic, bound = generic_truncation(coeffs, n, epsilon)
        N = (N_generic + 1) // 2 if symmetric else N_generic
    if N < 1:
        raise ValueError("N must be >= 1")
    c, m = moments(coeffs, n, N, even=symmetric)
    step = 2 if symmetric else 1
    value = log_leading_term(coeffs, n) + 4 * n * _series_sum(c.values, m.values, step)
    if bound is None and certify:
        bound = generic_remainder_bound(coeffs, n, 2 * N + 1 if symmetric else N).bound
    return EntropyResult(n, value, N, bound, "generic", time.perf_counter() - start)
