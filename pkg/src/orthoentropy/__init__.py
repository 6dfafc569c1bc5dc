"""Information entropy of orthonormal polynomials from their recurrence coefficients."""
from __future__ import annotations

from .entropy import EntropyResult, RemainderCertificate, TruncationError, entropy_from_series, mutual_energy
from .gegenbauer import (
    GegenbauerParams,
    TruncationPlan,
    asymptotic_constant,
    choose_truncation,
    closed_form_entropy,
    decay_majorant,
    entropy_gegenbauer,
    explicit_m,
    gegenbauer_coefficients,
    truncation_bound,
)
from .moments import (
    ChebyshevMomentSequence,
    PreconditionError,
    column_moments,
    even_column_moments,
    even_trace_moments,
    trace_moments,
)
from .oracle import QuadratureRule, gauss_rule, quadrature_entropy, zero_potential_entropy
from .recurrence import CoefficientError, CoefficientFileError, JacobiPrincipalMinor, RecurrenceCoefficients, minor
from .spherical import QuantumNumbers, spherical_entropy, spherical_entropy_profile

__version__ = "0.1.0"

__all__ = [
    "ChebyshevMomentSequence", "CoefficientError", "CoefficientFileError", "EntropyResult",
    "GegenbauerParams", "JacobiPrincipalMinor", "PreconditionError", "QuadratureRule",
    "QuantumNumbers", "RecurrenceCoefficients", "RemainderCertificate", "TruncationError",
    "TruncationPlan", "asymptotic_constant", "choose_truncation", "closed_form_entropy",
    "column_moments", "decay_majorant", "entropy_from_series", "entropy_gegenbauer",
    "even_column_moments", "even_trace_moments", "explicit_m", "gauss_rule",
    "gegenbauer_coefficients", "minor", "mutual_energy", "quadrature_entropy",
    "spherical_entropy", "spherical_entropy_profile", "trace_moments", "truncation_bound",
    "zero_potential_entropy",
]
