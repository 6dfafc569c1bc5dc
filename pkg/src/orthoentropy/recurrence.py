"""Recurrence coefficients of orthonormal polynomials and Jacobi-matrix minors.

Indexing follows the three-term recurrence

    x p_k(x) = a_{k+1} p_{k+1}(x) + b_k p_k(x) + a_k p_{k-1}(x),

with ``a`` indexed from 1 (off-diagonal) and ``b`` indexed from 0 (diagonal),
p_{-1} = 0 and p_0 = 1.  Internally arrays are 0-based, so ``a_array(m)[i]``
holds a_{i+1}.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np


class CoefficientError(ValueError):
    """Invalid or unavailable recurrence coefficient."""


class CoefficientFileError(CoefficientError):
    """Malformed coefficient file; ``path`` is a JSON path to the defect."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


# vectorized generator: integer index array -> float array
IndexFunction = Callable[[np.ndarray], np.ndarray]


class RecurrenceCoefficients:
    """Off-diagonal a_k (k >= 1) and diagonal b_k (k >= 0) coefficients.

    Either finite arrays or vectorized generator functions of the index.
    Instances are immutable; generators must be pure functions.
    """

    def __init__(
        self,
        a=None,
        b=None,
        *,
        a_func: Optional[IndexFunction] = None,
        b_func: Optional[IndexFunction] = None,
        name: str = "custom",
    ):
        if (a is None) == (a_func is None):
            raise CoefficientError("give exactly one of `a` (array) or `a_func` (generator)")
        self.name = name
        self._a_func = a_func
        self._b_func = b_func
        self._a = None if a is None else _frozen(a, "a")
        if b is not None and b_func is not None:
            raise CoefficientError("give at most one of `b` and `b_func`")
        self._b = None if b is None else _frozen(b, "b")
        if self._a is not None:
            bad = np.flatnonzero(self._a <= 0)
            if bad.size:
                raise CoefficientError(f"a_{bad[0] + 1} = {self._a[bad[0]]!r} is not positive")
        if self._b is not None:
            self._symmetric = bool(np.all(self._b == 0.0))
        else:
            self._symmetric = b_func is None

    @classmethod
    def from_functions(cls, a_func: IndexFunction, b_func: Optional[IndexFunction] = None, name: str = "custom"):
        return cls(a_func=a_func, b_func=b_func, name=name)

    @classmethod
    def from_json(cls, source) -> "RecurrenceCoefficients":
        """Parse ``{"a": [a_1, ...], "b": [b_0, ...]}`` from a file path or JSON text.

        ``b`` may be omitted (all zero).  Strings starting with ``{`` or ``[``
        are parsed as JSON text, anything else is read as a path.
        """
        if isinstance(source, Path) or (isinstance(source, str) and source.lstrip()[:1] not in ("{", "[")):
            path = Path(source)
            if not path.is_file():
                raise CoefficientFileError(f"no such coefficient file: {str(source)[:80]!r}")
            return cls.from_text(path.read_text())
        return cls.from_text(source)

    @classmethod
    def from_text(cls, text: str) -> "RecurrenceCoefficients":
        """Parse a JSON document given as a string."""
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CoefficientFileError(f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc
        return cls.from_mapping(doc)

    @classmethod
    def from_mapping(cls, doc) -> "RecurrenceCoefficients":
        if not isinstance(doc, dict):
            raise CoefficientFileError("top level must be an object", "$")
        if "a" not in doc:
            raise CoefficientFileError("missing required key 'a'", "$")
        unknown = sorted(set(doc) - {"a", "b"})
        if unknown:
            raise CoefficientFileError(f"unknown key {unknown[0]!r}", f"$.{unknown[0]}")
        a = _parse_list(doc["a"], "a", positive=True)
        b = _parse_list(doc["b"], "b", positive=False) if "b" in doc else None
        return cls(a=a, b=b, name="file")

    @property
    def is_symmetric(self) -> bool:
        """True when b_k = 0 for every available k (measure symmetric about 0)."""
        return self._symmetric

    @property
    def available(self) -> Optional[int]:
        """Number of a-coefficients available (None for generators, i.e. unbounded)."""
        return None if self._a is None else self._a.size

    def a(self, k: int) -> float:
        return float(self.a_array(k)[k - 1])

    def b(self, k: int) -> float:
        return float(self.b_array(k + 1)[k])

    def a_array(self, m: int) -> np.ndarray:
        """a_1..a_m as a float array."""
        if m <= 0:
            return np.empty(0)
        if self._a is not None:
            if m > self._a.size:
                raise CoefficientError(f"a_{m} requested but only a_1..a_{self._a.size} are available")
            return self._a[:m]
        idx = np.arange(1, m + 1)
        vals = np.asarray(self._a_func(idx), dtype=float)
        if vals.shape != (m,):
            raise CoefficientError("a_func must return one value per index")
        bad = np.flatnonzero(~(vals > 0) | ~np.isfinite(vals))
        if bad.size:
            raise CoefficientError(f"a_{bad[0] + 1} = {vals[bad[0]]!r} is not a finite positive number")
        return vals

    def b_array(self, m: int) -> np.ndarray:
        """b_0..b_{m-1} as a float array."""
        if m <= 0:
            return np.empty(0)
        if self._b is not None:
            if m > self._b.size:
                raise CoefficientError(f"b_{m - 1} requested but only b_0..b_{self._b.size - 1} are available")
            return self._b[:m]
        if self._b_func is None:
            if self._a is not None and m > self._a.size + 1:
                # keep the declared length contract even for the implicit zero diagonal
                raise CoefficientError(f"b_{m - 1} requested but coefficients end at index {self._a.size}")
            return np.zeros(m)
        vals = np.asarray(self._b_func(np.arange(m)), dtype=float)
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise CoefficientError(f"b_{bad[0]} = {vals[bad[0]]!r} is not finite")
        return vals

    def __repr__(self) -> str:
        size = "generator" if self._a is None else f"{self._a.size} terms"
        return f"RecurrenceCoefficients({self.name}, {size}, symmetric={self._symmetric})"


def _frozen(values, label: str) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        base = 1 if label == "a" else 0
        raise CoefficientError(f"{label}_{bad[0] + base} = {arr[bad[0]]!r} is not finite")
    arr.setflags(write=False)
    return arr


def _parse_list(raw, key: str, positive: bool) -> list:
    if not isinstance(raw, list):
        raise CoefficientFileError("must be an array of numbers", f"$.{key}")
    out = []
    for i, v in enumerate(raw):
        where = f"$.{key}[{i}]"
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise CoefficientFileError(f"expected a number, got {type(v).__name__}", where)
        if not math.isfinite(v):
            raise CoefficientFileError("value is not finite", where)
        if positive and v <= 0:
            raise CoefficientFileError(f"a-coefficients must be positive, got {v!r}", where)
        out.append(float(v))
    return out


@dataclass(frozen=True, eq=False)
class JacobiPrincipalMinor:
    """n x n leading block J_n: diagonal b_0..b_{n-1}, off-diagonal a_1..a_{n-1}."""

    n: int
    diag: np.ndarray
    offdiag: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, JacobiPrincipalMinor):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.diag, other.diag)
                and np.array_equal(self.offdiag, other.offdiag))

    __hash__ = None

    def __post_init__(self):
        if self.diag.shape != (self.n,) or self.offdiag.shape != (max(self.n - 1, 0),):
            raise ValueError("inconsistent minor dimensions")

    @property
    def is_symmetric_measure(self) -> bool:
        return bool(np.all(self.diag == 0.0))

    def trace(self) -> float:
        return math.fsum(self.diag)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return tridiag_apply(self.diag, self.offdiag, x)

    def dense(self) -> np.ndarray:
        """Dense copy, for tests and small diagnostics only."""
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def minor(coeffs: RecurrenceCoefficients, n: int) -> JacobiPrincipalMinor:
    """Principal n x n minor of the Jacobi matrix."""
    if n < 1:
        raise ValueError(f"minor order must be >= 1, got {n}")
    diag = np.array(coeffs.b_array(n))
    off = np.array(coeffs.a_array(n - 1))
    diag.setflags(write=False)
    off.setflags(write=False)
    return JacobiPrincipalMinor(n, diag, off)


def tridiag_apply(diag: np.ndarray, off: np.ndarray, x: np.ndarray, out: Optional[np.ndarray] = None) -> np.ndarray:
    """y = T x for the symmetric tridiagonal T = (diag, off).

    ``x`` may be a vector or a (m, batch) array; rows are the matrix index.
    """
    if out is None:
        out = np.empty_like(x)
    if x.ndim == 1:
        np.multiply(diag, x, out=out)
        if diag.size > 1:
            out[:-1] += off * x[1:]
            out[1:] += off * x[:-1]
    else:
        np.multiply(diag[:, None], x, out=out)
        if diag.size > 1:
            out[:-1] += off[:, None] * x[1:]
            out[1:] += off[:, None] * x[:-1]
    return out


def log_leading_term(coeffs: RecurrenceCoefficients, n: int) -> float:
    """-2 ln(gamma_n / 2^n) = 2 sum_{j<=n} ln(2 a_j), summed term-wise."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return 0.0
    return 2.0 * math.fsum(np.log(2.0 * coeffs.a_array(n)))


@dataclass(frozen=True)
class PolynomialEvaluation:
    """p_0(x)..p_n(x); ``values[k]`` is p_k (vector-valued when x is an array)."""

    x: np.ndarray
    values: np.ndarray
    extrapolated: bool

    @property
    def last(self) -> np.ndarray:
        return self.values[-1]


def evaluate_polynomials(coeffs: RecurrenceCoefficients, n: int, x) -> PolynomialEvaluation:
    """Forward three-term recurrence for p_0..p_n at x (scalar or array)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    a = coeffs.a_array(n)
    b = coeffs.b_array(n)
    values = np.empty((n + 1,) + x.shape)
    values[0] = 1.0
    if n >= 1:
        values[1] = (x - b[0]) / a[0]
    for k in range(1, n):
        values[k + 1] = ((x - b[k]) * values[k] - a[k - 1] * values[k - 1]) / a[k]
    extrapolated = bool(np.any(np.abs(x) > 1.0))
    return PolynomialEvaluation(x, values, extrapolated)


def polynomial_and_derivative(coeffs: RecurrenceCoefficients, n: int, x) -> tuple[np.ndarray, np.ndarray]:
    """p_n(x) and p_n'(x) by the differentiated recurrence."""
    x = np.asarray(x, dtype=float)
    a = coeffs.a_array(n)
    b = coeffs.b_array(n)
    p_prev, p = np.zeros_like(x), np.ones_like(x)
    d_prev, d = np.zeros_like(x), np.zeros_like(x)
    for k in range(n):
        a_k = a[k - 1] if k >= 1 else 0.0
        p_next = ((x - b[k]) * p - a_k * p_prev) / a[k]
        d_next = (p + (x - b[k]) * d - a_k * d_prev) / a[k]
        p_prev, p = p, p_next
        d_prev, d = d, d_next
    return p, d
