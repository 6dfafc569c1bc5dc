"""Independent reference machinery: Gauss rules from the Jacobi matrix and
direct entropy evaluations used to cross-check the moment series.

The eigensolver is Sturm-sequence bisection, vectorized over all eigenvalues,
so results are deterministic and need nothing beyond numpy.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .recurrence import RecurrenceCoefficients, evaluate_polynomials

log = logging.getLogger(__name__)


class EigensolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """r-point Gauss rule: ascending nodes and Cotes-Christoffel weights."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return math.fsum(self.weights * values)


def _sturm_count(diag: np.ndarray, off2: np.ndarray, x: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues strictly below each x (LDL^T inertia)."""
    count = np.zeros(x.shape, dtype=np.int64)
    q = diag[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count += q < 0
    for i in range(1, diag.size):
        q = (diag[i] - x) - off2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def tridiagonal_eigenvalues(diag: np.ndarray, off: np.ndarray, max_sweeps: int = 200) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending, by bisection."""
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    r = diag.size
    if r == 1:
        return diag.copy()
    absoff = np.abs(off)
    radius = np.zeros(r)
    radius[:-1] += absoff
    radius[1:] += absoff
    lo_bound = float(np.min(diag - radius))
    hi_bound = float(np.max(diag + radius))
    scale = max(abs(lo_bound), abs(hi_bound), 1e-300)
    off2 = off * off
    pivmin = np.finfo(float).tiny * max(1.0, float(off2.max()))
    j = np.arange(r)
    lo = np.full(r, lo_bound - 2 * np.finfo(float).eps * scale)
    hi = np.full(r, hi_bound + 2 * np.finfo(float).eps * scale)
    tol = 2 * np.finfo(float).eps * scale
    for sweep in range(max_sweeps):
        width = hi - lo
        active = width > tol + 2 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        if not active.any():
            break
        idx = np.flatnonzero(active)
        mid = 0.5 * (lo[idx] + hi[idx])
        cnt = _sturm_count(diag, off2, mid, pivmin)
        above = cnt > j[idx]
        hi[idx[above]] = mid[above]
        lo[idx[~above]] = mid[~above]
    else:
        worst = float((hi - lo).max())
        raise EigensolverError(f"bisection did not converge after {max_sweeps} sweeps "
                               f"(order {r}, widest bracket {worst:.3e}, tolerance {tol:.3e})")
    return 0.5 * (lo + hi)


def gauss_rule(coeffs: RecurrenceCoefficients, r: int) -> QuadratureRule:
    """Nodes = eigenvalues of J_r; weights = 1 / sum_{i<r} p_i(node)^2."""
    if r < 1:
        raise ValueError(f"rule order must be >= 1, got {r}")
    diag = coeffs.b_array(r)
    off = coeffs.a_array(r - 1)
    nodes = tridiagonal_eigenvalues(diag, off)
    vals = evaluate_polynomials(coeffs, r - 1, nodes).values
    christoffel = np.einsum("ij,ij->j", vals, vals)
    if not np.all(np.isfinite(christoffel)):
        raise EigensolverError("Christoffel sums overflowed; rule order too large for this measure")
    return QuadratureRule(r, nodes, 1.0 / christoffel)


def _xlogx(p2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p2)
    keep = p2 >= 1e-300
    out[keep] = p2[keep] * np.log(p2[keep])
    return out


def quadrature_entropy(coeffs: RecurrenceCoefficients, n: int, K: int) -> float:
    """-sum_j w_j p_n^2 ln p_n^2 at the nodes of the K-point rule for mu."""
    if n == 0:
        return 0.0
    if K < n + 1:
        raise ValueError(f"rule order K={K} must be >= n + 1 = {n + 1}")
    rule = gauss_rule(coeffs, K)
    p = evaluate_polynomials(coeffs, n, rule.nodes).last
    return -math.fsum(rule.weights * _xlogx(p * p))


def zero_potential_entropy(coeffs: RecurrenceCoefficients, n: int, K: int) -> float:
    """Entropy as -2 ln gamma_n + 2 sum_j V(zeta_j; nu_n), V by a K-point rule.

    Node collisions |zeta_j - xi_i| < 1e-14 are dropped from the potential sum.
    """
    if n == 0:
        return 0.0
    if K < 2 * n:
        raise ValueError(f"rule order K={K} must be >= 2n = {2 * n}")
    zeros = gauss_rule(coeffs, n).nodes
    rule = gauss_rule(coeffs, K)
    p = evaluate_polynomials(coeffs, n, rule.nodes).last
    w = rule.weights * p * p
    dist = np.abs(zeros[:, None] - rule.nodes[None, :])
    hit = dist < 1e-14
    if hit.any():
        log.info("zero_potential_entropy: skipped %d coincident node pairs", int(hit.sum()))
    logs = np.where(hit, 0.0, np.log(np.where(hit, 1.0, dist)))
    potentials = -(logs @ w)
    log_gamma = -math.fsum(np.log(coeffs.a_array(n)))
    return -2.0 * log_gamma + 2.0 * math.fsum(potentials)


def reference_entropy_gegenbauer(lam: float, n: int, epsilon: float = float(np.finfo(float).eps)) -> float:
    """E_n^lam from the even series truncated where the certified bound is <= epsilon.

    Independent of the production moment route beyond the bound itself:
    c_{2k} = mean T_{2k}(zeta_j) over the zeros from the bisection eigensolver,
    m_{2k} from the closed-form j-sums (alternating form up to k = n + ceil(lam),
    sign-definite tail form beyond; column recurrence for n > 30).
    """
    from . import gegenbauer as gg

    p = gg.GegenbauerParams(lam)
    if n == 0:
        return 0.0
    if p.integer_lambda:
        N = n + p.int_value
    else:
        N = gg.choose_truncation(p, n, epsilon, max_terms=1 << 24).N0
    coeffs = gg.gegenbauer_coefficients(p)
    theta = np.arccos(np.clip(tridiagonal_eigenvalues(np.zeros(n), coeffs.a_array(n - 1)), -1.0, 1.0))
    k_head = min(N, n + math.ceil(lam))
    if n <= gg.EXPLICIT_MAX_N:
        head = np.array([gg.explicit_m(p, n, k) for k in range(1, k_head + 1)])
    else:
        from .moments import even_column_moments

        head = even_column_moments(coeffs, n, max(k_head, 1)).values[1 : k_head + 1]
    parts = [gg.log_leading_product(p, n)]
    chunk = 8192
    for k0 in range(1, N + 1, chunk):
        k1 = min(k0 + chunk, N + 1)
        k = np.arange(k0, k1)
        c = np.cos(2.0 * np.outer(k, theta)).mean(axis=1)
        if k1 - 1 <= k_head:
            m = head[k0 - 1 : k1 - 1]
        else:
            split = max(k0, k_head + 1)
            m = np.concatenate((head[k0 - 1 : split - 1], gg.tail_moments(p, n, split, k1)))
        parts.append(2 * n * math.fsum(c * m / k))
    return math.fsum(parts)


def normalized_legendre(l: int, m: int, x: np.ndarray) -> np.ndarray:
    """P(x) with |Y_lm(theta, phi)|^2 = P(cos theta)^2 and 2 pi int P^2 dx = 1 (m >= 0).

    Standard fully-normalized recurrence in l at fixed m, independent of the
    Gegenbauer machinery; the Condon-Shortley phase is dropped.
    """
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got l={l}, m={m}")
    x = np.asarray(x, dtype=float)
    i = np.arange(1, m + 1)
    log_mm = 0.5 * (math.log((2 * m + 1) / (4 * math.pi)) + math.fsum(np.log((2 * i - 1) / (2 * i))))
    with np.errstate(divide="ignore"):
        p_prev = np.exp(log_mm + 0.5 * m * np.log1p(-x * x))
    if l == m:
        return p_prev
    p = x * math.sqrt(2 * m + 3) * p_prev
    for k in range(m + 2, l + 1):
        a_k = math.sqrt((4 * k * k - 1) / (k * k - m * m))
        a_prev = math.sqrt((4 * (k - 1) ** 2 - 1) / ((k - 1) ** 2 - m * m))
        p_prev, p = p, a_k * (x * p - p_prev / a_prev)
    return p


@functools.lru_cache(maxsize=4)
def _legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def sphere_quadrature_entropy(l: int, m: int, order: int = 4000) -> float:
    """-integral over the sphere of |Y|^2 ln |Y|^2: Gauss-Legendre in cos(theta), exact in phi."""
    x, w = _legendre_rule(order)
    P = normalized_legendre(l, abs(m), x)
    return -2.0 * math.pi * math.fsum(w * _xlogx(P * P))
