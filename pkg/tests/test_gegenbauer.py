from __future__ import annotations

import logging
import math

import mpmath
import numpy as np
import pytest

from orthoentropy import gegenbauer as gg
from orthoentropy.entropy import TruncationError
from orthoentropy.gegenbauer import (
    GegenbauerParams,
    asymptotic_constant,
    choose_truncation,
    closed_form_entropy,
    decay_majorant,
    entropy_gegenbauer,
    explicit_m,
    explicit_m_exact,
    extension_length,
    gegenbauer_coefficients,
    gegenbauer_partial_sums,
    log_leading_product,
    tail_moments,
    truncation_bound,
)
from orthoentropy.moments import PreconditionError, even_column_moments
from orthoentropy.oracle import quadrature_entropy
from orthoentropy.recurrence import log_leading_term

from conftest import reference_entropy
from test_entropy import ent2_extended


# --- parameters and coefficients ------------------------------------------

def test_params_domain():
    with pytest.raises(ValueError):
        GegenbauerParams(-0.5)
    with pytest.raises(ValueError):
        GegenbauerParams(float("nan"))
    assert GegenbauerParams(3.0 + 1e-13).integer_lambda
    assert not GegenbauerParams(3.0 + 1e-9).integer_lambda
    assert not GegenbauerParams(-0.3).integer_lambda


@pytest.mark.parametrize("lam", [-0.3, 0.0, 0.5, 1.0, 2.5, 10.0])
def test_normalization_constant(lam):
    with mpmath.workdps(30):
        # int_{-1}^{1} (1 - x^2)^(lam - 1/2) dx = B(1/2, lam + 1/2)
        integral = mpmath.beta(0.5, mpmath.mpf(lam) + 0.5)
    assert GegenbauerParams(lam).c_lambda * float(integral) == pytest.approx(1.0, rel=1e-12)


def test_coefficient_examples():
    np.testing.assert_allclose(gegenbauer_coefficients(1.0).a_array(50), 0.5, atol=1e-16)
    a0 = gegenbauer_coefficients(0.0).a_array(10)
    assert a0[0] == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    np.testing.assert_allclose(a0[1:], 0.5, atol=1e-16)
    assert gegenbauer_coefficients(0.5).a(1) == pytest.approx(1 / math.sqrt(3), rel=1e-15)
    assert gegenbauer_coefficients(0.5).is_symmetric


@pytest.mark.parametrize("lam", [-0.4, 0.25, 1.5, 7.0])
def test_coefficients_against_formula(lam):
    a = gegenbauer_coefficients(lam).a_array(40)
    with mpmath.workdps(30):
        L = mpmath.mpf(lam)
        ref = [0.5 * mpmath.sqrt(k * (k + 2 * L - 1) / ((k + L - 1) * (k + L))) for k in range(1, 41)]
    np.testing.assert_allclose(a, [float(v) for v in ref], rtol=1e-14)


def test_log_leading_product_matches_recurrence():
    for lam in (0.0, 0.5, 2.0, 6.5):
        coeffs = gegenbauer_coefficients(lam)
        for n in (1, 7, 60):
            # ln prod = -2 ln(gamma_n / 2^n) - 2n ln 2 ... both computed independently
            assert log_leading_product(lam, n) == pytest.approx(log_leading_term(coeffs, n), abs=1e-12)


# --- closed forms -------------------------------------------------------------

def test_closed_forms():
    assert closed_form_entropy(0, 7) == pytest.approx(-0.3068528194, abs=1e-10)
    assert closed_form_entropy(1, 10) == -10 / 11
    for n in (1, 10, 100, 10**6):
        assert closed_form_entropy(2, n) == pytest.approx(ent2_extended(n), abs=1e-13)
    with pytest.raises(ValueError):
        closed_form_entropy(1.5, 3)


def test_asymptotic_constant():
    assert asymptotic_constant(1.0) == pytest.approx(-1.0, abs=1e-15)
    assert asymptotic_constant(2.0) == pytest.approx(-1 - math.log(3), abs=1e-15)
    assert asymptotic_constant(0.0) == pytest.approx(math.log(2) - 1, abs=1e-15)
    assert asymptotic_constant(1e-9) == pytest.approx(math.log(2) - 1, abs=1e-8)


def test_closed_forms_approach_limits():
    for lam in (0, 1, 2):
        assert closed_form_entropy(lam, 10**7) == pytest.approx(asymptotic_constant(lam), abs=1e-5)


# --- explicit moments ------------------------------------------------------------

def test_explicit_m_examples():
    assert explicit_m(1.0, 0, 1) == pytest.approx(-0.5, abs=1e-16)
    assert explicit_m(1.0, 0, 2) == 0.0
    for lam in (0, 1, 2, 3):
        for n in (0, 3, 8):
            assert explicit_m(float(lam), n, n + lam + 1) == 0.0


def test_explicit_m_exact_is_rational():
    vals = explicit_m_exact(2.0, 3, 8)  # k = 1..8; terminates after k = n + lam = 5
    assert vals[4] != 0 and vals[5:] == [0, 0, 0]
    assert float(vals[0]) == pytest.approx(explicit_m(2.0, 3, 1), abs=0)


def test_explicit_m_refuses_large_n():
    with pytest.raises(PreconditionError, match="even_column_moments"):
        explicit_m(1.5, 31, 2)
    with pytest.raises(ValueError):
        explicit_m(1.5, 3, 0)


@pytest.mark.parametrize("lam", [0.5, 1.5, 2.0, 3.7])
def test_explicit_matches_column_recurrence(lam):
    coeffs = gegenbauer_coefficients(lam)
    for n in range(0, 11):
        m = even_column_moments(coeffs, n, 20).values
        for k in range(1, 21):
            assert explicit_m(lam, n, k) == pytest.approx(m[k], abs=1e-9)


@pytest.mark.parametrize("lam", [0.5, 1.5, 3.7, 12.25])
def test_tail_form_agrees_in_overlap(lam):
    for n in (0, 2, 9):
        k0 = n + math.floor(lam) + 1
        for k in range(k0, k0 + 12):
            assert explicit_m(lam, n, k, form="tail") == pytest.approx(explicit_m(lam, n, k), abs=1e-13)
    with pytest.raises(ValueError):
        tail_moments(lam, 3, 2, 4)


def test_tail_moments_large_n_against_recurrence():
    lam, n = 1.5, 120
    ks = np.arange(n + 5, n + 400)
    tail = tail_moments(lam, n, ks[0], ks[-1] + 1)
    col = even_column_moments(gegenbauer_coefficients(lam), n, ks[-1]).values[ks]
    np.testing.assert_allclose(tail, col, atol=1e-13)


def test_half_integer_tail_decay():
    lam, n = 0.5, 1
    m = [explicit_m(lam, n, k) for k in range(5, 102)]
    for a, b in zip(m, m[1:]):
        assert abs(b) <= abs(a)
    ks = np.arange(5, 102)
    scaled = np.abs(m) * ks**2
    assert scaled.max() / scaled.min() < 3.0


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0, 3.0])
def test_termination(lam):
    coeffs = gegenbauer_coefficients(lam)
    for n in (0, 1, 5, 10):
        m = even_column_moments(coeffs, n, n + int(lam) + 15).values
        assert np.all(np.abs(m[n + int(lam) + 1:]) <= 1e-12)


# --- truncation bounds ------------------------------------------------------------

def bound_extended(lam, n, N) -> float:
    with mpmath.workdps(50):
        L = mpmath.mpf(lam)
        total = mpmath.mpf(0)
        for j in range(n + 1):
            total += (mpmath.rf(2 * L + j, n) / (mpmath.factorial(n - j) * mpmath.factorial(j) * (j + L))
                      * abs(mpmath.rf(-j - L + 1, N - 1)) / mpmath.rf(j + L + 1, N - 1))
        return float(n * (n + L) / N * total)


def majorant_extended(lam, n, N) -> float:
    with mpmath.workdps(50):
        L = mpmath.mpf(lam)
        s = mpmath.mpf(0)
        for j in range(n + 1):
            s += ((n + L) / (j + L) * mpmath.rf(2 * L + j, n) / (mpmath.factorial(n - j) * mpmath.factorial(j))
                  * mpmath.rf(L, j) * mpmath.rf(L + 1, j) / (mpmath.rf(N - L - j, j) * mpmath.rf(N + L, j)))
        head = (abs(L * mpmath.sin(mpmath.pi * L)) * mpmath.gamma(L) ** 2
                * ((N - L) / (N + L)) ** (N - L - 1) * n * mpmath.e ** (2 * L) / (mpmath.pi * N))
        return float(head * s)


@pytest.mark.parametrize("lam, n, N", [(2.5, 5, 8), (1.5, 20, 25), (0.5, 3, 4), (21.5, 10, 40), (7.3, 30, 500)])
def test_bound_against_extended_precision(lam, n, N):
    assert truncation_bound(lam, n, N) == pytest.approx(bound_extended(lam, n, N), rel=1e-11)
    assert decay_majorant(lam, n, N) == pytest.approx(majorant_extended(lam, n, N), rel=1e-11)


def test_bound_domain_errors():
    with pytest.raises(PreconditionError):
        truncation_bound(-0.25, 3, 10)
    with pytest.raises(PreconditionError):
        truncation_bound(2.0, 3, 10)
    with pytest.raises(ValueError):
        truncation_bound(1.5, 3, 4)


def test_bound_decreasing_for_n200():
    vals = [truncation_bound(1.5, 200, N) for N in range(202, 401)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_majorant_property_and_monotonicity():
    lam, n, N = 1.5, 20, 25
    F = decay_majorant(lam, n, N)
    for h in range(51):
        assert truncation_bound(lam, n, N + h) * (N + lam + h) ** (2 * lam) <= F * (1 + 1e-12)
    Fs = [decay_majorant(lam, n, M) for M in range(22, 400, 7)]
    assert all(b < a for a, b in zip(Fs, Fs[1:]))


def test_extension_reaches_epsilon():
    lam, n = 1.5, 20
    N = n + 2
    h = extension_length(lam, n, N, 1e-8)
    assert truncation_bound(lam, n, N + h) <= 1e-8


def test_bound_dominates_observed_error_small_case():
    lam, n = 2.5, 5
    ps = gegenbauer_partial_sums(lam, n, 4000, tail="matrix")
    ref = entropy_gegenbauer(lam, n, epsilon=1e-15).value
    for N in (8, 9, 12, 20, 50, 200, 1000):
        assert abs(ps[N - 2] - ref) <= truncation_bound(lam, n, N)


# --- truncation plans ------------------------------------------------------------

def test_integer_plan():
    plan = choose_truncation(3.0, 12, 1e-3)
    assert plan.N0 == 15 and plan.terminating and plan.bound_at_N0 == 0.0


def test_plan_is_lowest_admissible():
    for eps in (1e-4, 1e-6):
        plan = choose_truncation(1.5, 200, eps)
        assert truncation_bound(1.5, 200, plan.N0) <= eps < truncation_bound(1.5, 200, plan.N0 - 1)
        assert plan.rigorous and not plan.capped and plan.bound_at_N0 <= eps


def test_huge_epsilon_plan():
    plan = choose_truncation(1.5, 200, 1e10)
    assert plan.N0 == 202 and plan.h_used == 0


def test_plan_rejects_nonpositive_epsilon():
    with pytest.raises(ValueError):
        choose_truncation(1.5, 10, 0.0)


def test_capped_plan(caplog):
    with caplog.at_level(logging.WARNING):
        plan = choose_truncation(0.5, 50, 1e-12, max_terms=5000)
    assert plan.capped and plan.N0 == 5000 and plan.bound_at_N0 > 1e-12
    assert "capped" in caplog.text


def test_negative_lambda_plan_is_generic():
    plan = choose_truncation(-0.25, 3, 10.0)
    assert not plan.rigorous and not plan.terminating


# --- entropy ------------------------------------------------------------------------

def test_entropy_examples():
    r = entropy_gegenbauer(2.0, 100)
    assert r.value == pytest.approx(closed_form_entropy(2, 100), abs=1e-10)
    assert r.method == "gegenbauer-terminating" and r.truncation_N == 102 and r.bound == 0.0
    assert entropy_gegenbauer(1.0, 25).value == pytest.approx(-25 / 26, abs=1e-12)
    r = entropy_gegenbauer(0.5, 1, epsilon=1e-10)
    assert r.value == pytest.approx(2 / 3 - math.log(3), abs=1e-10)
    assert r.method == "gegenbauer-bounded" and 0 < r.bound <= 1e-10
    coeffs = gegenbauer_coefficients(0.5)
    assert quadrature_entropy(coeffs, 1, 2000) == pytest.approx(2 / 3 - math.log(3), abs=1e-6)


def test_entropy_degree_zero_and_argument_errors():
    assert entropy_gegenbauer(1.7, 0).value == 0.0
    with pytest.raises(ValueError):
        entropy_gegenbauer(1.7, -1)
    with pytest.raises(ValueError):
        entropy_gegenbauer(1.7, 4, epsilon=1e-3, N_override=10)
    with pytest.raises(ValueError):
        entropy_gegenbauer(1.7, 4, N_override=0)


def test_override_semantics():
    r = entropy_gegenbauer(1.5, 10, N_override=40)
    assert r.truncation_N == 40 and r.bound == pytest.approx(truncation_bound(1.5, 10, 41))
    short = entropy_gegenbauer(2.0, 10, N_override=5)
    assert short.method == "gegenbauer-bounded" and short.bound is None
    assert entropy_gegenbauer(2.0, 10, N_override=12).method == "gegenbauer-terminating"


def test_bounded_result_certifies_its_value():
    lam, n = 3.5, 15
    ref = entropy_gegenbauer(lam, n, epsilon=1e-15).value
    for eps in (1e-3, 1e-6, 1e-9):
        r = entropy_gegenbauer(lam, n, epsilon=eps)
        assert abs(r.value - ref) <= r.bound <= eps


def test_negative_lambda_entropy():
    lam, n = -0.25, 6
    r = entropy_gegenbauer(lam, n, N_override=400)
    assert r.method == "generic" and r.bound > 0
    q = quadrature_entropy(gegenbauer_coefficients(lam), n, 3000)
    assert r.value == pytest.approx(q, abs=1e-3)
    assert r.value < 0


def test_tail_switch_consistent_with_matrix_path():
    lam, n, N = 0.5, 20, 6000
    auto = gegenbauer_partial_sums(lam, n, N)
    matrix = gegenbauer_partial_sums(lam, n, N, tail="matrix")
    assert np.max(np.abs(auto - matrix)) <= 1e-12
    with pytest.raises(ValueError):
        gegenbauer_partial_sums(lam, n, 10, tail="other")


def test_plan_value_within_epsilon_of_reference():
    for lam in (1.5, 21.5):
        ref = reference_entropy(lam, 200)
        for eps in (1e-4, 1e-6, 1e-8):
            assert abs(entropy_gegenbauer(lam, 200, epsilon=eps).value - ref) <= eps


def test_asymptotic_approach_lambda2():
    limit = asymptotic_constant(2.0)
    dev = [abs(entropy_gegenbauer(2.0, n).value - limit) for n in (50, 100, 200, 400)]
    assert all(b < a for a, b in zip(dev, dev[1:]))


def test_truncation_error_is_importable_from_entropy():
    assert gg.TruncationError is TruncationError
