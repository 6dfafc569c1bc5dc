"""Generalized Chebyshev moments of the zero-counting measure and of p_n^2 dmu.

    c_{k,n} = (1/n) tr T_k(J_n)             (zero-counting measure)
    m_{k,n} = <e_{n+1}, T_k(J_r) e_{n+1}>   (p_n^2 dmu), r = n + 1 + floor(N/2)

Both come from the Chebyshev recurrence T_k = 2 A T_{k-1} - T_{k-2} driven by a
symmetric tridiagonal operator A.  For the general path A = J; for symmetric
measures (b = 0) the even moments use A = T_2(J) = 2 J^2 - I, which splits
into two tridiagonal blocks acting on even and odd indices.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .recurrence import JacobiPrincipalMinor, RecurrenceCoefficients, minor, tridiag_apply

log = logging.getLogger(__name__)

MOMENT_SLACK = 1e-12


class PreconditionError(ValueError):
    """Input does not satisfy an operation's precondition."""


@dataclass(frozen=True, eq=False)
class ChebyshevMomentSequence:
    """Moments ``values[i]`` of index ``step * i`` (step 2 for even-only sequences)."""

    kind: str
    n: int
    values: np.ndarray
    step: int = 1
    violations: int = field(default=0, compare=False)

    @property
    def N(self) -> int:
        """Highest Chebyshev index held."""
        return self.step * (self.values.size - 1)

    def at(self, k: int) -> float:
        """Moment of Chebyshev index k (odd k of an even sequence are exactly 0)."""
        if k < 0 or k > self.N:
            raise IndexError(f"moment index {k} outside 0..{self.N}")
        if k % self.step:
            return 0.0
        return float(self.values[k // self.step])

    def full(self) -> np.ndarray:
        """Moments for every index 0..N, odd entries filled with zeros for even sequences."""
        if self.step == 1:
            return self.values
        out = np.zeros(self.N + 1)
        out[:: self.step] = self.values
        return out


def _sequence(kind: str, n: int, values: np.ndarray, step: int) -> ChebyshevMomentSequence:
    bad = int(np.count_nonzero(np.abs(values) > 1.0 + MOMENT_SLACK))
    if bad:
        log.warning("%d %s moments exceed 1 in magnitude (n=%d, max |value| = %.3e)",
                    bad, kind, n, float(np.abs(values).max()))
    values = np.array(values)
    values.setflags(write=False)
    return ChebyshevMomentSequence(kind, n, values, step, bad)


# --- kernels --------------------------------------------------------------

def _even_blocks(diag_off_a: np.ndarray, size: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tridiagonal blocks of T_2(J) = 2J^2 - I on even / odd indices (zero-diagonal J).

    ``diag_off_a`` holds the off-diagonal a_1..a_{size-1} of J.
    """
    a = diag_off_a
    sq = np.zeros(size + 1)
    sq[1:size] = a * a
    # (J^2)_{ii} = a_i^2 + a_{i+1}^2 inside the truncated block
    d = 2.0 * (sq[:size] + sq[1 : size + 1]) - 1.0
    e = 2.0 * a[:-1] * a[1:] if size > 2 else np.empty(0)
    return [(d[0::2], e[0::2]), (d[1::2], e[1::2])]


def _chebyshev_traces(blocks: list[tuple[np.ndarray, np.ndarray]], K: int) -> np.ndarray:
    """sum over blocks of tr T_k(A_block), k = 0..K, by batched vector recurrences.

    Blocks are zero-padded to a common size and stepped together by one fused
    tridiagonal product.  Iterates are only run to ceil(K/2): for symmetric A,
    tr T_{2k} = 2 <T_k, T_k>_F - size and tr T_{2k+1} = 2 <T_{k+1}, T_k>_F - tr A.
    """
    blocks = [(d, e) for d, e in blocks if d.size]
    m = max(d.size for d, _ in blocks)
    B = len(blocks)
    D = np.zeros((B, m))
    E = np.zeros((B, max(m - 1, 0)))
    prev = np.zeros((B, m, m))
    size = 0
    for i, (d, e) in enumerate(blocks):
        D[i, : d.size] = d
        E[i, : e.size] = e
        prev[i, : d.size, : d.size] = np.eye(d.size)
        size += d.size
    Dc = D[:, :, None]
    Ec = E[:, :, None]

    def apply(X, out):
        np.multiply(Dc, X, out=out)
        if m > 1:
            out[:, :-1] += Ec * X[:, 1:]
            out[:, 1:] += Ec * X[:, :-1]
        return out

    traces = np.empty(K + 1)
    traces[0] = float(size)
    if K == 0:
        return traces
    tr_A = math.fsum(D.ravel())
    traces[1] = tr_A
    cur = apply(prev, np.empty_like(prev))
    nxt = np.empty_like(prev)
    flat = lambda X: X.reshape(-1)
    # cur = T_h, prev = T_{h-1}
    h = 1
    while True:
        if 2 * h <= K:
            traces[2 * h] = 2.0 * float(np.dot(flat(cur), flat(cur))) - size
        if 2 * h - 1 <= K and h >= 2:
            traces[2 * h - 1] = 2.0 * float(np.dot(flat(cur), flat(prev))) - tr_A
        if 2 * h >= K:
            break
        apply(cur, nxt)
        nxt *= 2.0
        nxt -= prev
        prev, cur, nxt = cur, nxt, prev
        h += 1
    return traces


def _chebyshev_traces_direct(blocks: list[tuple[np.ndarray, np.ndarray]], K: int) -> np.ndarray:
    """Reference version of :func:`_chebyshev_traces`: every iterate, fsum of diagonals."""
    total = np.zeros(K + 1)
    for d, e in blocks:
        if not d.size:
            continue
        prev = np.eye(d.size)
        cur = tridiag_apply(d, e, prev)
        total[0] += d.size
        if K >= 1:
            total[1] += math.fsum(np.diagonal(cur))
        for k in range(2, K + 1):
            nxt = 2.0 * tridiag_apply(d, e, cur) - prev
            total[k] += math.fsum(np.diagonal(nxt))
            prev, cur = cur, nxt
    return total


def _chebyshev_column(diag: np.ndarray, off: np.ndarray, pos: int, K: int) -> np.ndarray:
    """(T_k(A) e_pos)_pos for k = 0..K, sweeping only the support of the iterate."""
    size = diag.size
    out = np.empty(K + 1)
    out[0] = 1.0
    prev = np.zeros(size)
    prev[pos] = 1.0
    if K == 0:
        return out
    cur = tridiag_apply(diag, off, prev)
    out[1] = cur[pos]
    nxt = np.zeros(size)
    for k in range(2, K + 1):
        # support of the k-th iterate: [pos - k, pos + k]
        lo = max(pos - k, 0)
        hi = min(pos + k + 1, size)
        w = slice(lo, hi)
        tridiag_apply(diag[w], off[lo : hi - 1], cur[w], out=nxt[w])
        nxt[w] *= 2.0
        nxt[w] -= prev[w]
        out[k] = nxt[pos]
        prev, cur, nxt = cur, nxt, prev
    return out


# --- public operations ----------------------------------------------------

def _check_counts(n: int, N: int, label: str = "N"):
    if n < 1:
        raise ValueError(f"polynomial degree must be >= 1 here, got n={n}")
    if N < 1:
        raise ValueError(f"{label} must be >= 1, got {N}")


def trace_moments(J: JacobiPrincipalMinor, N: int) -> ChebyshevMomentSequence:
    """c_{k,n} = tr T_k(J_n) / n for k = 0..N."""
    _check_counts(J.n, N)
    traces = _chebyshev_traces([(np.asarray(J.diag), np.asarray(J.offdiag))], N)
    return _sequence("zero-counting", J.n, traces / J.n, 1)


def column_moments(coeffs: RecurrenceCoefficients, n: int, N: int, extra_rows: int = 0) -> ChebyshevMomentSequence:
    """m_{k,n} = integral of T_k p_n^2 dmu for k = 0..N (exact through the truncated J_r).

    ``extra_rows`` enlarges r beyond n + 1 + floor(N/2); the values must not
    change, which the tests use to check the truncation argument.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    r = n + 1 + N // 2 + extra_rows
    diag = coeffs.b_array(r)
    off = coeffs.a_array(r - 1)
    vals = _chebyshev_column(diag, off, n, N)
    return _sequence("nu", n, vals, 1)


def _require_symmetric(diag: np.ndarray):
    if np.any(diag != 0.0):
        raise PreconditionError("even-only moments need a symmetric measure (all b_k = 0); "
                                "use trace_moments/column_moments instead")


def even_trace_moments(J: JacobiPrincipalMinor, K: int) -> ChebyshevMomentSequence:
    """c_{2k,n} for k = 0..K through the parity blocks of T_2(J_n)."""
    _check_counts(J.n, K, "K")
    _require_symmetric(J.diag)
    if J.n == 1:
        blocks = [(np.array([-1.0]), np.empty(0))]
    else:
        blocks = _even_blocks(np.asarray(J.offdiag), J.n)
    traces = _chebyshev_traces(blocks, K)
    return _sequence("zero-counting", J.n, traces / J.n, 2)


def even_column_moments(coeffs: RecurrenceCoefficients, n: int, K: int, extra_rows: int = 0) -> ChebyshevMomentSequence:
    """m_{2k,n} for k = 0..K, with r = n + 1 + K (the general r for N = 2K)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    r = n + 1 + K + extra_rows
    _require_symmetric(coeffs.b_array(r))
    d, e = _even_blocks(coeffs.a_array(r - 1), r)[n % 2]
    vals = _chebyshev_column(d, e, n // 2, K)
    return _sequence("nu", n, vals, 2)


def moments(coeffs: RecurrenceCoefficients, n: int, N: int, even: bool | None = None):
    """(c, m) pair through index N, choosing the even-only path for symmetric measures.

    On the even path N counts even terms, so the sequences reach index 2N.
    """
    if even is None:
        even = coeffs.is_symmetric
    J = minor(coeffs, n)
    if even:
        return even_trace_moments(J, N), even_column_moments(coeffs, n, N)
    return trace_moments(J, N), column_moments(coeffs, n, N)
