"""Gegenbauer (ultraspherical) specifics.

Orthonormal polynomials G_n^lam for the unit weight c_lam (1 - x^2)^(lam - 1/2),
lam > -1/2: recurrence coefficients, closed-form entropies, explicit even
moments m_{2k,n}, the truncation bound and its decay majorant, and the
truncation-index search used by :func:`entropy_gegenbauer`.

Truncation convention: a result "at N" sums the even series through k = N.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import special
from .entropy import EntropyResult, TruncationError, generic_remainder_bound, generic_truncation
from .moments import PreconditionError, even_column_moments, even_trace_moments
from .recurrence import RecurrenceCoefficients, minor

log = logging.getLogger(__name__)

INTEGER_TOL = 1e-12
EXPLICIT_MAX_N = 30
DEFAULT_EPSILON = 1e-10
DEFAULT_MAX_TERMS = 1 << 18


@dataclass(frozen=True)
class GegenbauerParams:
    lam: float

    def __post_init__(self):
        if not (self.lam > -0.5 and math.isfinite(self.lam)):
            raise ValueError(f"Gegenbauer parameter must satisfy lambda > -1/2, got {self.lam!r}")

    @property
    def integer_lambda(self) -> bool:
        r = round(self.lam)
        return r >= 0 and abs(self.lam - r) <= INTEGER_TOL

    @property
    def int_value(self) -> int:
        return int(round(self.lam))

    @property
    def c_lambda(self) -> float:
        """Normalization of the unit weight, Gamma(lam+1) / (sqrt(pi) Gamma(lam+1/2))."""
        return math.exp(math.lgamma(self.lam + 1) - math.lgamma(self.lam + 0.5)) / math.sqrt(math.pi)


def _params(p) -> GegenbauerParams:
    return p if isinstance(p, GegenbauerParams) else GegenbauerParams(float(p))


# --- coefficients and closed forms ------------------------------------------

def gegenbauer_coefficients(params) -> RecurrenceCoefficients:
    """a_k = (1/2) sqrt(k (k + 2 lam - 1) / ((k + lam - 1)(k + lam))), b = 0."""
    lam = _params(params).lam

    def a_func(k: np.ndarray) -> np.ndarray:
        k = k.astype(float)
        # 4 a_k^2 = 1 - lam (lam - 1) / ((k + lam - 1)(k + lam)); k = 1 gives 2 / (1 + lam)
        with np.errstate(divide="ignore", invalid="ignore"):
            four_a2 = 1.0 - lam * (lam - 1.0) / ((k + lam - 1.0) * (k + lam))
        four_a2 = np.where(k == 1, 2.0 / (1.0 + lam), four_a2)
        return 0.5 * np.sqrt(four_a2)

    return RecurrenceCoefficients.from_functions(a_func, name=f"gegenbauer(lambda={lam:g})")


def log_leading_product(params, n: int) -> float:
    """ln prod_{j<=n} j (j + 2 lam - 1) / ((j + lam - 1)(j + lam)), term-wise."""
    lam = _params(params).lam
    if n <= 0:
        return 0.0
    j = np.arange(2, n + 1, dtype=float)
    logs = np.log1p(-lam * (lam - 1.0) / ((j + lam - 1.0) * (j + lam)))
    return math.fsum(np.concatenate(([math.log(2.0 / (1.0 + lam))], logs)))


def closed_form_entropy(lam: float, n: int) -> float:
    """Known entropies for lam = 0, 1, 2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if lam == 0:
        return 0.0 if n == 0 else math.log(2.0) - 1.0
    if lam == 1:
        return -n / (n + 1)
    if lam == 2:
        poly = (n**3 - 5 * n**2 - 29 * n - 27) / ((n + 1) * (n + 2) * (n + 3))
        power = math.exp((n + 2) * math.log1p(2.0 / (n + 1)))
        return math.log((n + 3) / (3.0 * (n + 1))) - poly - power / (n + 2)
    raise ValueError(f"no closed form for lambda={lam!r}; supported: 0, 1, 2")


def asymptotic_constant(lam: float) -> float:
    """Limit of E_n^lam as n -> infinity: -1 - ln(Gamma(2 lam) / (Gamma(lam) Gamma(lam + 1)))."""
    lam = _params(lam).lam
    if abs(lam) <= INTEGER_TOL:
        return math.log(2.0) - 1.0
    return -1.0 - (math.lgamma(2 * lam) - math.lgamma(lam) - math.lgamma(lam + 1))


# --- explicit moments -------------------------------------------------------

def _lead_log_sign(lam: float, n: int, j: int) -> tuple[float, int]:
    """log|.| and sign of (n + lam)/(j + lam) * (2 lam + j)_n / (j! (n - j)!)."""
    if j == 0 and n >= 1:
        # (2 lam)_n / lam = 2 (2 lam + 1)_{n-1}; removes the 0/0 at lam = 0
        lp, sp = special.log_pochhammer_signed(2 * lam + 1, n - 1)
        lm = math.log(2.0) + math.log(n + lam) + lp
        return lm - math.lgamma(n + 1), sp
    if n == 0:
        return 0.0, 1
    lp, sp = special.log_pochhammer_signed(2 * lam + j, n)
    ratio = (n + lam) / (j + lam)
    lm = lp + math.log(abs(ratio)) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
    return lm, sp * (1 if ratio > 0 else -1)


def _explicit_sum(lam: float, n: int, k: int) -> float:
    return float(explicit_m_exact(lam, n, k)[-1])


def explicit_m_exact(lam: float, n: int, K: int) -> list[Fraction]:
    """m_{2k,n} for k = 1..K from the alternating j-sum in exact rational arithmetic.

    The float ``lam`` is taken at its exact binary value; every factor is a
    rational function of lam, so the alternating sum carries no rounding.
    """
    L = Fraction(lam)
    lead = []
    for j in range(n + 1):
        # (n + lam)/(j + lam) (2 lam + j)_n / (j! (n - j)!), with (2 lam)_n / lam = 2 (2 lam + 1)_{n-1}
        if j == 0 and n >= 1:
            val = 2 * (n + L) * _rising(2 * L + 1, n - 1)
        elif n == 0:
            val = Fraction(1)
        else:
            val = (n + L) / (j + L) * _rising(2 * L + j, n)
        lead.append((-1) ** j * val / (math.factorial(j) * math.factorial(n - j)))
    ratio = [Fraction(1)] * (n + 1)
    out = []
    for k in range(1, K + 1):
        for j in range(n + 1):
            # (-j - lam)_k / (j + lam + 1)_k advanced by one factor
            ratio[j] = ratio[j] * (-j - L + k - 1) / (j + L + k)
        out.append(sum(a * r for a, r in zip(lead, ratio)))
    return out


def _rising(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def _tail_log_terms(lam: float, n: int) -> np.ndarray:
    """k-independent part of each j-term of the tail representation (logs)."""
    out = np.empty(n + 1)
    for j in range(n + 1):
        lm, s = _lead_log_sign(lam, n, j)
        assert s > 0, "tail terms are positive for lambda > -1/2"
        out[j] = lm + 2 * math.lgamma(j + lam + 1)
    return out


def _tail_prefactor(lam: float) -> float:
    return -math.sin(math.pi * lam) / math.pi


def explicit_m(params, n: int, k: int, form: str = "sum") -> float:
    """m_{2k,n} from its closed-form j-sum.

    ``form="sum"`` is the alternating representation valid for all k >= 1;
    ``form="tail"`` the sign-definite one valid for k > n + lam.  The
    alternating sum cancels badly, so it is refused for n > 30.
    """
    lam = _params(params).lam
    if k < 1:
        raise ValueError("explicit_m requires k >= 1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > EXPLICIT_MAX_N:
        raise PreconditionError(f"explicit moment formula is limited to n <= {EXPLICIT_MAX_N} "
                                "(cancellation); use even_column_moments instead")
    if form == "sum":
        return _explicit_sum(lam, n, k)
    if form == "tail":
        return float(tail_moments(lam, n, k, k + 1)[0])
    raise ValueError(f"unknown form {form!r}")


def tail_moments(params, n: int, k_start: int, k_stop: int, chunk: int = 16384) -> np.ndarray:
    """m_{2k,n} for k_start <= k < k_stop, all k > n + lam, via the sign-definite sum.

    Each j-term carries Gamma(k - j - lam) / Gamma(k + j + lam + 1), advanced in
    k on the log scale.  No cancellation occurs, so any n is allowed.
    """
    p = _params(params)
    lam = p.lam
    if k_start <= n + lam:
        raise ValueError(f"tail representation needs k > n + lambda = {n + lam}")
    count = k_stop - k_start
    if count <= 0:
        return np.empty(0)
    if p.integer_lambda:
        return np.zeros(count)
    base = _tail_log_terms(lam, n)
    pref = _tail_prefactor(lam)
    out = np.empty(count)
    for c0 in range(0, count, chunk):
        c1 = min(c0 + chunk, count)
        k0 = k_start + c0
        logs = np.empty((n + 1, c1 - c0))
        for j in range(n + 1):
            logs[j] = base[j] + special.log_gamma_ratio_run(k0 - j - lam, k0 + j + lam + 1, c1 - c0)
        peak = logs.max(axis=0)
        out[c0:c1] = pref * np.exp(peak) * np.exp(logs - peak).sum(axis=0)
    return out


# --- truncation bounds ------------------------------------------------------

def _check_bound_domain(p: GegenbauerParams, n: int, N: int):
    if not p.lam > 0:
        raise PreconditionError("truncation bound is only provided for lambda > 0; "
                                "use the generic remainder bound for -1/2 < lambda <= 0")
    if p.integer_lambda:
        raise PreconditionError("integer lambda: the series terminates, no bound needed")
    if not N > n + p.lam:
        raise ValueError(f"truncation bound needs N > n + lambda ({N} <= {n + p.lam})")


def log_truncation_bound(params, n: int, N: int) -> float:
    """log of the bound on the tail 2n sum_{k>=N} c_{2k} m_{2k} / k."""
    p = _params(params)
    _check_bound_domain(p, n, N)
    lam = p.lam
    if n == 0:
        return -math.inf
    logs = []
    for j in range(n + 1):
        lp, _ = special.log_pochhammer_signed(2 * lam + j, n)
        lq, _ = special.log_pochhammer_signed(-j - lam + 1, N - 1)
        lr, _ = special.log_pochhammer_signed(j + lam + 1, N - 1)
        logs.append(lp - math.log(j + lam) - math.lgamma(j + 1) - math.lgamma(n - j + 1) + lq - lr)
    return math.log(n * (n + lam) / N) + special.logsumexp(logs)


def truncation_bound(params, n: int, N: int) -> float:
    """Upper bound on the error of the even series truncated after k = N - 1."""
    return math.exp(log_truncation_bound(params, n, N))


def log_decay_majorant(params, n: int, N: int) -> float:
    """log of the majorant F with bound(N + h) <= F(N) / (N + lam + h)^(2 lam)."""
    p = _params(params)
    _check_bound_domain(p, n, N)
    lam = p.lam
    if n == 0:
        return -math.inf
    logs = []
    for j in range(n + 1):
        lp, _ = special.log_pochhammer_signed(2 * lam + j, n)
        la, _ = special.log_pochhammer_signed(lam, j)
        lb, _ = special.log_pochhammer_signed(lam + 1, j)
        lc, _ = special.log_pochhammer_signed(N - lam - j, j)
        ld, _ = special.log_pochhammer_signed(N + lam, j)
        logs.append(math.log((n + lam) / (j + lam)) + lp - math.lgamma(n - j + 1) - math.lgamma(j + 1)
                    + la + lb - lc - ld)
    head = (math.log(abs(lam * math.sin(math.pi * lam))) + 2 * math.lgamma(lam)
            + (N - lam - 1) * math.log((N - lam) / (N + lam))
            + math.log(n) + 2 * lam - math.log(math.pi * N))
    return head + special.logsumexp(logs)


def decay_majorant(params, n: int, N: int) -> float:
    return math.exp(log_decay_majorant(params, n, N))


def extension_length(params, n: int, N: int, epsilon: float) -> float:
    """Smallest integer h with F(N) / (N + lam + h)^(2 lam) <= epsilon (may be inf)."""
    lam = _params(params).lam
    expo = (log_decay_majorant(params, n, N) - math.log(epsilon)) / (2 * lam)
    if expo > 700:
        return math.inf
    return max(math.ceil(math.exp(expo) - N - lam), 0)


@dataclass(frozen=True)
class TruncationPlan:
    """Chosen truncation index N0 with its certificate.

    ``capped`` marks plans stopped at ``max_terms`` before reaching epsilon;
    ``rigorous`` is False when the bound is a sampled estimate.
    """

    N0: int
    epsilon: float
    bound_at_N0: float
    h_used: int
    terminating: bool
    rigorous: bool = True
    capped: bool = False


def choose_truncation(params, n: int, epsilon: float, max_terms: int = DEFAULT_MAX_TERMS) -> TruncationPlan:
    """Lowest N0 with bound(N0) <= epsilon, by the majorant extension plus bisection."""
    p = _params(params)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if p.integer_lambda:
        return TruncationPlan(n + p.int_value, epsilon, 0.0, 0, True)
    if p.lam < 0:
        coeffs = gegenbauer_coefficients(p)
        N_generic, bound = generic_truncation(coeffs, n, epsilon)
        return TruncationPlan(max(N_generic // 2, 1), epsilon, bound, 0, False, rigorous=False)
    lam = p.lam
    log_eps = math.log(epsilon)
    N = n + math.floor(lam) + 1

    def ok(M: int) -> bool:
        return log_truncation_bound(p, n, M) <= log_eps

    if ok(N):
        return TruncationPlan(N, epsilon, truncation_bound(p, n, N), 0, False)
    h = extension_length(p, n, N, epsilon)
    hi = N + h if h < math.inf else math.inf
    if hi == math.inf or hi > max_terms:
        if not ok(max_terms):
            bound = truncation_bound(p, n, max_terms)
            log.warning("truncation for lambda=%g, n=%d capped at N=%d: bound %.3e > epsilon %.1e",
                        lam, n, max_terms, bound, epsilon)
            return TruncationPlan(max_terms, epsilon, bound, max_terms - N, False, capped=True)
        hi = max_terms
    hi = int(hi)
    while not ok(hi):
        # guards the integer rounding of h; the majorant argument says this is not entered
        hi = min(2 * hi, max_terms)
        if hi == max_terms and not ok(hi):
            raise TruncationError("bound did not reach epsilon at the majorant extension")
    lo = N
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return TruncationPlan(hi, epsilon, truncation_bound(p, n, hi), int(h) if h < math.inf else hi - N, False)


# --- entropy ----------------------------------------------------------------

def column_switch(lam: float, n: int) -> int:
    """Last k computed by the column recurrence before switching to the tail formula."""
    return max(4 * (n + math.ceil(lam) + 1), 4096)


def gegenbauer_moments(params, n: int, N: int, tail: str = "auto"):
    """(c_{2k}, m_{2k}) arrays for k = 0..N.

    ``tail="auto"`` takes m_{2k} beyond :func:`column_switch` from the
    sign-definite tail formula instead of the growing column recurrence;
    ``"matrix"`` forces the recurrence throughout.
    """
    p = _params(params)
    coeffs = gegenbauer_coefficients(p)
    c = even_trace_moments(minor(coeffs, n), N).values
    K_col = N
    if tail == "auto" and not p.integer_lambda:
        K_col = min(N, column_switch(p.lam, n))
    elif tail not in ("auto", "matrix"):
        raise ValueError(f"unknown tail mode {tail!r}")
    m = np.empty(N + 1)
    m[: K_col + 1] = even_column_moments(coeffs, n, K_col).values
    if K_col < N:
        m[K_col + 1 :] = tail_moments(p, n, K_col + 1, N + 1)
    return c, m


def gegenbauer_partial_sums(params, n: int, N: int, tail: str = "auto") -> np.ndarray:
    """E_n^lam truncated after k = 1..N (entry i is the value at k = i + 1)."""
    c, m = gegenbauer_moments(params, n, N, tail)
    k = np.arange(1, N + 1)
    terms = 2 * n * c[1:] * m[1:] / k
    return log_leading_product(params, n) + np.cumsum(terms)


def _series_value(params, n: int, N: int, tail: str) -> float:
    c, m = gegenbauer_moments(params, n, N, tail)
    k = np.arange(1, N + 1)
    return log_leading_product(params, n) + 2 * n * math.fsum(c[1:] * m[1:] / k)


def entropy_gegenbauer(params, n: int, epsilon: Optional[float] = None, N_override: Optional[int] = None,
                       max_terms: int = DEFAULT_MAX_TERMS, tail: str = "auto") -> EntropyResult:
    """E_n^lam from the even Chebyshev-moment series.

    Integer lam: the series terminates at k = n + lam and the value is exact.
    lam > 0: N chosen so that the certified tail bound is <= epsilon.
    -1/2 < lam < 0: N from the sampled generic remainder estimate.
    """
    p = _params(params)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if epsilon is not None and N_override is not None:
        raise ValueError("epsilon and N_override are mutually exclusive")
    start = time.perf_counter()
    if n == 0:
        return EntropyResult(0, 0.0, 0, 0.0, "gegenbauer-terminating", time.perf_counter() - start)
    coeffs = None
    if N_override is not None:
        N = int(N_override)
        if N < 1:
            raise ValueError("truncation index must be >= 1")
        if p.integer_lambda:
            exact = N >= n + p.int_value
            method = "gegenbauer-terminating" if exact else "gegenbauer-bounded"
            bound = 0.0 if exact else None
        elif p.lam > 0 and N + 1 > n + p.lam:
            method, bound = "gegenbauer-bounded", truncation_bound(p, n, N + 1)
        else:
            coeffs = gegenbauer_coefficients(p)
            method = "generic"
            bound = generic_remainder_bound(coeffs, n, 2 * N + 1).bound
    else:
        plan = choose_truncation(p, n, DEFAULT_EPSILON if epsilon is None else epsilon, max_terms)
        N = plan.N0
        if plan.terminating:
            method, bound = "gegenbauer-terminating", 0.0
        elif plan.rigorous:
            # the sum runs through k = N0, one term past the plan's certificate
            method, bound = "gegenbauer-bounded", truncation_bound(p, n, N + 1)
        else:
            method, bound = "generic", plan.bound_at_N0
    value = _series_value(p, n, N, tail)
    if value > 1e-10:
        log.warning("entropy estimate %.3e is positive (lambda=%g, n=%d, N=%d)", value, p.lam, n, N)
    return EntropyResult(n, value, N, bound, method, time.perf_counter() - start)
