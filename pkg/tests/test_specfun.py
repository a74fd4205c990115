"""Special functions: gamma machinery, hypergeometric series, Legendre bounds.

The bracket suites mirror the inequalities the certificate rests on; they
run at full sample size and permit zero violations.
"""

import cmath
import math
import random

import pytest

from greenbound.errors import NonConvergenceError
from greenbound.specfun import (
    C_sigma,
    gamma_ratio_bounds,
    gamma_ratio_upper,
    gauss_value,
    hyp2f1,
    legendre_P_neg1,
    legendre_P_negm,
    legendre_Q0,
    legendre_Q_deriv,
    log_gamma_complex,
    p_sigma,
)


def test_log_gamma_matches_real_lgamma():
    for x in (0.1, 0.5, 1.0, 2.5, 7.0, 20.0, 120.5):
        value = log_gamma_complex(complex(x, 0.0))
        assert math.isclose(value.real, math.lgamma(x), rel_tol=1e-13), x
        assert abs(value.imag) < 1e-13


def test_log_gamma_conjugate_symmetry():
    rng = random.Random(52001)
    for _ in range(100):
        z = complex(rng.uniform(0.1, 6.0), rng.uniform(-40.0, 40.0))
        a = log_gamma_complex(z)
        b = log_gamma_complex(z.conjugate())
        assert cmath.isclose(a, b.conjugate(), rel_tol=1e-12), z


def test_log_gamma_recurrence():
    rng = random.Random(52002)
    for _ in range(100):
        z = complex(rng.uniform(0.2, 5.0), rng.uniform(-20.0, 20.0))
        lhs = log_gamma_complex(z + 1.0)
        rhs = log_gamma_complex(z) + cmath.log(z)
        assert abs(lhs - rhs) < 1e-11, z


def test_hyp2f1_log_series():
    # 2F1(1, 1; 2; z) = -log(1 - z)/z
    for z in (-0.9, -0.5, -0.1, 0.1, 0.5, 0.9):
        value = hyp2f1(1.0, 1.0, 2.0, z)
        assert cmath.isclose(value, -math.log(1.0 - z) / z, rel_tol=1e-13), z


def test_hyp2f1_binomial_series():
    # 2F1(a, b; b; z) = (1 - z)^-a independently of b
    for a in (0.3, 1.7):
        for z in (-0.8, 0.4):
            value = hyp2f1(a, 2.25, 2.25, z)
            assert cmath.isclose(value, (1.0 - z) ** (-a), rel_tol=1e-13)


def test_gauss_value_at_one():
    # Gauss: 2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b))
    a, b, c = 0.3, 0.4, 2.0
    expected = math.exp(
        math.lgamma(c) + math.lgamma(c - a - b) - math.lgamma(c - a) - math.lgamma(c - b)
    )
    assert cmath.isclose(gauss_value(a, b, c), expected, rel_tol=1e-12)


def test_legendre_Q0_matches_log_form():
    for u in (1.0001, 1.5, 3.0, 10.0, 1e5):
        assert math.isclose(legendre_Q0(u), 0.5 * math.log((u + 1.0) / (u - 1.0)), rel_tol=1e-14)
    with pytest.raises(ValueError):
        legendre_Q0(1.0)


def test_legendre_P_neg1_domain():
    with pytest.raises(ValueError):
        legendre_P_neg1(0.7, 1.0)
    with pytest.raises(ValueError):
        legendre_P_neg1(0.7, 3.0)


def test_legendre_P_neg1_at_s_one():
    # At s = 1 the series is the constant 1, leaving sqrt((u-1)/(u+1))
    for u in (1.01, 1.5, 2.0, 2.9):
        value = legendre_P_neg1(1.0, u)
        assert cmath.isclose(value, math.sqrt((u - 1.0) / (u + 1.0)), rel_tol=1e-13)


def test_order_one_bracket_suite():
    """Two-sided bracket for the order-one function, 500 samples."""
    rng = random.Random(52010)
    low_coeff = 2.0 - 4.0 / math.pi
    high_coeff = 4.0 / math.pi
    for _ in range(500):
        u = 1.0 + rng.uniform(1e-4, 1.99)
        lam = rng.uniform(0.0, min(0.25, 0.5 / (u - 1.0)))
        s = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * lam))
        value = legendre_P_neg1(s, u).real
        scale = math.sqrt((u - 1.0) / (u + 1.0))
        assert low_coeff * scale <= value <= high_coeff * scale, (u, s)


def test_q_derivative_bracket_suite():
    """Q' is negative and dominated by the closed envelope, 500 samples."""
    rng = random.Random(52011)
    for _ in range(500):
        nu = rng.uniform(0.0, 10.0)
        u = 1.0 + math.exp(rng.uniform(math.log(1e-3), math.log(99.0)))
        value = legendre_Q_deriv(nu, u)
        floor = -((2.0 / (u + 1.0)) ** nu) / (u * u - 1.0)
        assert floor <= value <= 0.0, (nu, u)


def test_legendre_P_negm_validation():
    with pytest.raises(ValueError):
        legendre_P_negm(1, 0.7, 2.0)  # odd order unsupported
    with pytest.raises(ValueError):
        legendre_P_negm(2, 0.7, 1.0)  # u must exceed 1
    with pytest.raises(ValueError):
        legendre_P_negm(2, 0.5 + 1e-5j, 2.0)  # removable singularity zone


def test_legendre_P_negm_closed_form_at_s_one():
    rng = random.Random(52012)
    for _ in range(200):
        u = 1.0 + math.exp(rng.uniform(math.log(0.1), math.log(99.0)))
        value = legendre_P_negm(2, 1.0, u).real
        closed = (u - 1.0) / (2.0 * u + 2.0)
        assert abs(value - closed) <= 1e-12 * closed, u


def test_legendre_P_negm_order_zero_is_legendre_P():
    # m = 0 reduces to P_{s-1}; compare with the order-one route at s = 1
    for u in (1.2, 2.0, 5.0):
        value = legendre_P_negm(0, 1.0, u).real
        assert math.isclose(value, 1.0, rel_tol=1e-12), u


def test_regular_strip_bound_grid():
    """Envelope for the order-two function on vertical strips.

    Grid over sigma in {0.1, 0.25, 0.306, 0.45}, t log-spaced in [0.01, 50],
    u log-spaced in (1, 100]; zero violations permitted.
    """
    t_grid = [0.01 * (50.0 / 0.01) ** (k / 11.0) for k in range(12)]
    u_grid = [1.0 + 1e-2 * (99.0 / 1e-2) ** (k / 11.0) for k in range(12)]
    for sigma in (0.1, 0.25, 0.306, 0.45):
        for t in t_grid:
            s = complex(sigma, t)
            cap_factor = abs(s * (1.0 - s)) ** -1.25
            for u in u_grid:
                value = abs(legendre_P_negm(2, s, u))
                cap = cap_factor * p_sigma(sigma, u) / (u * u - 1.0)
                assert value <= cap, (sigma, t, u, value, cap)


def test_gamma_ratio_sandwich_suite():
    """Closed two-sided bounds vs the log-gamma oracle, 1000 samples."""
    rng = random.Random(52013)
    for _ in range(1000):
        a = rng.uniform(0.1, 5.0)
        b = rng.uniform(a, a + 5.0)
        y = rng.uniform(-50.0, 50.0)
        low, high = gamma_ratio_bounds(a, b, y)
        oracle = math.exp(
            (log_gamma_complex(complex(a, y)) - log_gamma_complex(complex(b, y))).real
        )
        assert low <= oracle <= high, (a, b, y)
        if b >= 0.5:
            # the simplified decay bound dominates the sharp one
            assert gamma_ratio_upper(a, b, y) >= high, (a, b, y)


def test_C_sigma_reference_values():
    # pinned against independent evaluation of the closed formulas
    C, C_prime = C_sigma(0.306)
    assert math.isclose(C, 3.431554624209227, rel_tol=1e-12)
    assert math.isclose(C_prime, 3.047607684557647, rel_tol=1e-12)
    with pytest.raises(ValueError):
        C_sigma(0.0)
    with pytest.raises(ValueError):
        C_sigma(0.5)


def test_p_sigma_series_identity():
    # the coefficient sum collapses: sum |(-3/2)_n|/n! t^n = (1-t)^{3/2} + 3t
    rng = random.Random(52014)
    for _ in range(100):
        sigma = rng.uniform(0.05, 0.45)
        u = 1.0 + math.exp(rng.uniform(math.log(1e-2), math.log(99.0)))
        x = u + math.sqrt(u * u - 1.0)
        t = 1.0 / (x * x)
        C, C_prime = C_sigma(sigma)
        expected = (
            (C * x ** (2.0 - sigma) + C_prime * x ** (1.0 + sigma))
            / (4.0 * math.sqrt(math.pi))
            * ((1.0 - t) ** 1.5 + 3.0 * t)
        )
        assert math.isclose(p_sigma(sigma, u), expected, rel_tol=1e-13), (sigma, u)


def test_p_sigma_at_u_equal_one():
    # x = 1 collapses the envelope to 3 (C + C') / (4 sqrt(pi))
    for sigma in (0.1, 0.306):
        C, C_prime = C_sigma(sigma)
        expected = 3.0 * (C + C_prime) / (4.0 * math.sqrt(math.pi))
        assert math.isclose(p_sigma(sigma, 1.0), expected, rel_tol=1e-13)
