"""Entropy of spherical harmonics through the Gegenbauer reduction.

With lam = |m| + 1/2 and |Y_lm|^2 expressed through G_{l-|m|}^lam,

    S_lm = ln(2 pi / c_lam) + E_{l-|m|}^lam
           - |m| [2 psi(l + |m| + 1) - 2 psi(l + 1/2) - 2 ln 2 - 1/(l + 1/2)].

Only |m| enters, so S_{l,m} = S_{l,-m} exactly.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .gegenbauer import DEFAULT_MAX_TERMS, GegenbauerParams, entropy_gegenbauer
from .special import digamma_half_integer, digamma_integer

DEFAULT_EPSILON = 1e-8


@dataclass(frozen=True)
class QuantumNumbers:
    """Orbital l >= 0 and azimuthal m with |m| <= l."""

    l: int
    m: int

    def __post_init__(self):
        if int(self.l) != self.l or int(self.m) != self.m:
            raise ValueError(f"quantum numbers must be integers, got l={self.l!r}, m={self.m!r}")
        if self.l < 0:
            raise ValueError(f"l must be nonnegative, got {self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l (l={self.l}, m={self.m})")


def _digamma_correction(l: int, am: int) -> float:
    if am == 0:
        return 0.0
    bracket = (2.0 * digamma_integer(l + am + 1) - 2.0 * digamma_half_integer(l)
               - 2.0 * math.log(2.0) - 1.0 / (l + 0.5))
    return am * bracket


def spherical_entropy(q, m: Optional[int] = None, epsilon: float = DEFAULT_EPSILON,
                      max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """S_{l,m}[Y] in nats; accepts ``QuantumNumbers`` or ``(l, m)``."""
    if not isinstance(q, QuantumNumbers):
        q = QuantumNumbers(int(q), 0 if m is None else int(m))
    elif m is not None:
        raise TypeError("give m inside QuantumNumbers or as an argument, not both")
    am = abs(q.m)
    params = GegenbauerParams(am + 0.5)
    E = entropy_gegenbauer(params, q.l - am, epsilon=epsilon, max_terms=max_terms).value
    return math.log(2.0 * math.pi / params.c_lambda) + E - _digamma_correction(q.l, am)


def _profile_entry(args) -> float:
    l, am, epsilon, max_terms = args
    return spherical_entropy(QuantumNumbers(l, am), epsilon=epsilon, max_terms=max_terms)


def spherical_entropy_profile(l: int, m_range: Optional[Iterable[int]] = None,
                              epsilon: float = DEFAULT_EPSILON, max_terms: int = DEFAULT_MAX_TERMS,
                              workers: int = 1) -> np.ndarray:
    """(m, S) rows for m in ``m_range`` (default -l..l); each |m| is computed once.

    ``workers > 1`` spreads the distinct |m| over a process pool.
    """
    ms = list(range(-l, l + 1)) if m_range is None else [int(m) for m in m_range]
    for m in ms:
        QuantumNumbers(l, m)
    distinct = sorted({abs(m) for m in ms})
    tasks = [(l, am, epsilon, max_terms) for am in distinct]
    if workers > 1 and len(tasks) > 1:
        # largest work first: small |m| means high degree and small lam
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_profile_entry, tasks))
    else:
        values = [_profile_entry(t) for t in tasks]
    table = dict(zip(distinct, values))
    out = np.empty((len(ms), 2))
    out[:, 0] = ms
    out[:, 1] = [table[abs(m)] for m in ms]
    return out
