from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from orthoentropy.recurrence import RecurrenceCoefficients

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def chebyshev_first_kind() -> RecurrenceCoefficients:
    """p_n = sqrt(2) T_n under (1/pi)(1 - x^2)^(-1/2)."""
    return RecurrenceCoefficients.from_functions(
        lambda k: np.where(k == 1, 1.0 / math.sqrt(2.0), 0.5), name="chebyshev-T")


def shifted_measure(n_terms: int = 80, shift: float = 0.1) -> RecurrenceCoefficients:
    """A non-symmetric measure: Chebyshev-U coefficients with constant diagonal."""
    return RecurrenceCoefficients(a=np.full(n_terms, 0.45), b=np.full(n_terms + 1, shift), name="shifted")


@pytest.fixture
def cheb_t() -> RecurrenceCoefficients:
    return chebyshev_first_kind()


_REFERENCES: dict = {}


def reference_entropy(lam: float, n: int) -> float:
    """Machine-eps series reference, cached for the session."""
    from orthoentropy.oracle import reference_entropy_gegenbauer

    key = (lam, n)
    if key not in _REFERENCES:
        _REFERENCES[key] = reference_entropy_gegenbauer(lam, n)
    return _REFERENCES[key]
