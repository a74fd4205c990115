"""Cusp-neighbourhood smoothing, radii admissibility, and certificate transport."""

import cmath
import math
import random

import pytest

from greenbound._quad import integrate
from greenbound.bounds import BoundReport
from greenbound.cusps import (
    CuspBoundReport,
    CuspGeometry,
    N_delta_eps,
    admissible_eps,
    check_lemma_bla,
    extend_bounds,
    lambda_integral_check,
    lambda_xi,
    poisson_kernel,
    r_delta,
)
from greenbound.errors import ConstraintViolation


def small_report():
    return BoundReport(
        q_plus=1.0,
        q_minus=-1.0,
        D_plus=1.0,
        D_minus=1.0,
        N_bar=2.0,
        spectral_factor=1.0,
        A=-3.0,
        B=1.0,
        mode="theorem-exact",
    )


def reference_geometry():
    return CuspGeometry(eps=0.05, eps_prime=0.2, delta=2.0, min_c=1.0, count_pm1=2)


def test_poisson_kernel_values():
    assert poisson_kernel(0.0) == 1.0
    for r in (0.1, 0.5, 0.9):
        assert math.isclose(poisson_kernel(r), (1.0 + r) / (1.0 - r), rel_tol=1e-14)
        # rotation-reflection symmetry
        z = r * cmath.exp(0.7j)
        assert math.isclose(poisson_kernel(z), poisson_kernel(z.conjugate()), rel_tol=1e-14)
    with pytest.raises(ValueError, match="poisson_kernel"):
        poisson_kernel(1.0)
    with pytest.raises(ValueError, match="poisson_kernel"):
        poisson_kernel(0.8 + 0.7j)


def test_poisson_kernel_mean_value():
    # the kernel has circular mean 1 at every radius
    for r in (0.3, 0.8):
        mean = integrate(lambda a: poisson_kernel(r * cmath.exp(2j * math.pi * a)), 0.0, 1.0, 1e-12)
        assert abs(mean - 1.0) <= 1e-10


def test_poisson_convolution_semigroup():
    """Circular convolution of two kernels is the kernel of the product point."""
    rng = random.Random(90100)
    for _ in range(10):
        zeta = rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.random())
        eta = rng.uniform(0.05, 0.9) * cmath.exp(2j * math.pi * rng.random())

        def integrand(a):
            turn = cmath.exp(2j * math.pi * a)
            return poisson_kernel(turn * zeta) * poisson_kernel(eta / turn)

        value = integrate(integrand, 0.0, 1.0, 1e-10)
        assert abs(value - poisson_kernel(zeta * eta)) <= 1e-8


def test_phase_average_fourier_series():
    """lambda(xi, t) equals sum over n of xi^n sin(2 pi n t)/(pi n)."""
    rng = random.Random(90200)
    for _ in range(20):
        xi = rng.uniform(-0.9, 0.9)
        t = rng.uniform(0.0, 1.0)
        partial = sum(
            xi**n * math.sin(2.0 * math.pi * n * t) / (math.pi * n) for n in range(1, 400)
        )
        assert abs(lambda_xi(xi, t) - partial) <= 1e-10


def test_phase_average_branches_and_domain():
    assert isinstance(lambda_xi(0.5, 0.3), float)
    assert isinstance(lambda_xi(0.5j, 0.3), complex)
    assert lambda_xi(0.0, 0.3) == 0.0
    with pytest.raises(ValueError, match="lambda_xi"):
        lambda_xi(1.0, 0.3)


def test_smoothing_radius_values():
    assert math.isclose(r_delta(2.0), 0.026919643087244035, rel_tol=1e-14)
    # decreasing in delta with limit 1/48
    assert r_delta(1.5) > r_delta(2.0) > r_delta(10.0) > 1.0 / 48.0
    assert math.isclose(r_delta(1e8), 1.0 / 48.0, rel_tol=1e-3)
    with pytest.raises(ValueError, match="delta"):
        r_delta(1.0)


def test_lambda_integral_bound_grid():
    """|Integral of lambda(xi, y)/y + (1/2) log(1 - xi)| <= 1/(12 t)."""
    for xi in (-0.8, -0.3, 0.4, 0.9):
        for t in (0.1, 0.5, 2.0, 7.0):
            lhs, cap = lambda_integral_check(xi, t)
            assert math.isclose(cap, 1.0 / (12.0 * t), rel_tol=1e-14)
            assert lhs <= cap, (xi, t, lhs, cap)


def test_lambda_integral_vanishes_at_zero():
    lhs, _ = lambda_integral_check(0.0, 1.0)
    assert lhs <= 1e-12


def test_smoothing_count_bracket_grid():
    """45-point bracket: the smoothed count sits within eps r_delta of its
    main term (1/eps)(2/pi) arctan sqrt((delta-1)/2) - (1/2 pi) log|1 - xi|."""
    for delta in (1.5, 2.0, 3.0):
        main_angle = (2.0 / math.pi) * math.atan(math.sqrt((delta - 1.0) / 2.0))
        radius = r_delta(delta)
        for eps in (0.05, 0.1, 0.3):
            for xi in (0.0, 0.5, -0.5, 0.9, 0.5j):
                value = N_delta_eps(delta, eps, xi)
                main = main_angle / eps - math.log(abs(1.0 - xi)) / (2.0 * math.pi)
                assert abs(value - main) <= eps * radius, (delta, eps, xi)


def test_smoothing_count_domain():
    with pytest.raises(ValueError, match="delta"):
        N_delta_eps(1.0, 0.1, 0.0)
    with pytest.raises(ValueError, match="eps"):
        N_delta_eps(2.0, 0.0, 0.0)
    with pytest.raises(ValueError, match="xi"):
        N_delta_eps(2.0, 0.1, 1.0)


def test_admissible_radii_formula():
    outer_cap, inner_cap = admissible_eps(2.0, 1.0)
    spread = 2.0 + math.sqrt(3.0)
    assert math.isclose(outer_cap, 1.0 / math.sqrt(spread), rel_tol=1e-14)
    assert math.isclose(inner_cap, outer_cap / spread, rel_tol=1e-14)
    assert math.isclose(outer_cap, 0.5176380902050415, rel_tol=1e-12)
    assert math.isclose(inner_cap, 0.1387007082420295, rel_tol=1e-12)
    # caps scale linearly in min_c and shrink as delta grows
    outer_2, inner_2 = admissible_eps(2.0, 2.0)
    assert math.isclose(outer_2, 2.0 * outer_cap, rel_tol=1e-14)
    assert math.isclose(inner_2, 2.0 * inner_cap, rel_tol=1e-14)
    assert admissible_eps(3.0, 1.0)[0] < outer_cap
    with pytest.raises(ValueError):
        admissible_eps(0.9, 1.0)
    with pytest.raises(ValueError):
        admissible_eps(2.0, 0.0)


def test_geometry_validation():
    reference_geometry()  # the base configuration is admissible
    with pytest.raises(ConstraintViolation, match="delta"):
        CuspGeometry(eps=0.05, eps_prime=0.2, delta=1.0, min_c=1.0, count_pm1=2)
    with pytest.raises(ConstraintViolation, match="0 < eps < eps_prime"):
        CuspGeometry(eps=0.2, eps_prime=0.1, delta=2.0, min_c=1.0, count_pm1=2)
    with pytest.raises(ConstraintViolation, match="min_c"):
        CuspGeometry(eps=0.05, eps_prime=0.2, delta=2.0, min_c=-1.0, count_pm1=2)
    with pytest.raises(ConstraintViolation, match="count_pm1"):
        CuspGeometry(eps=0.05, eps_prime=0.2, delta=2.0, min_c=1.0, count_pm1=3)
    with pytest.raises(ConstraintViolation, match="eps_prime"):
        CuspGeometry(eps=0.05, eps_prime=0.6, delta=2.0, min_c=1.0, count_pm1=2)
    with pytest.raises(ConstraintViolation, match="exceeds eps_prime"):
        CuspGeometry(eps=0.1, eps_prime=0.2, delta=2.0, min_c=1.0, count_pm1=2)


def test_report_validation():
    with pytest.raises(ConstraintViolation, match="case"):
        CuspBoundReport(case="z", base_A=0.0, base_B=1.0, offset_terms="")
    with pytest.raises(ConstraintViolation, match="together"):
        CuspBoundReport(case="c", base_A=0.0, base_B=1.0, offset_terms="", A_tilde=0.0)
    with pytest.raises(ConstraintViolation, match="empty"):
        CuspBoundReport(
            case="c", base_A=0.0, base_B=1.0, offset_terms="", A_tilde=2.0, B_tilde=1.0
        )


def test_extend_mixed_configurations_echo_base():
    base = small_report()
    geom = reference_geometry()
    for case, token in (("a", "height(z)"), ("a_prime", "height(w)"), ("b", "height(z)")):
        report = extend_bounds(base, geom, case)
        assert report.case == case
        assert report.base_A == base.A
        assert report.base_B == base.B
        assert report.A_tilde is None and report.B_tilde is None
        assert token in report.offset_terms
    both = extend_bounds(base, geom, "b").offset_terms
    assert "height(z)" in both and "height(w)" in both
    with pytest.raises(ConstraintViolation, match="case"):
        extend_bounds(base, geom, "d")


def test_extend_same_cusp_offsets():
    """Case c: shift by count (1/eps')(1 - (2/pi) arctan sqrt((delta-1)/2)),
    widen by count eps' r_delta on each side."""
    base = small_report()
    geom = reference_geometry()
    report = extend_bounds(base, geom, "c")
    assert math.isclose(report.A_tilde - base.A, 6.07096662245749, rel_tol=1e-12)
    assert math.isclose(report.B_tilde - base.B, 6.092502336929101, rel_tol=1e-12)
    # loose cross-check against the displayed 4-decimal offsets
    assert abs((report.A_tilde - base.A) - 6.0710) <= 1e-4
    assert abs((report.B_tilde - base.B) - 6.0925) <= 1e-4
    assert report.A_tilde <= report.B_tilde
    widening = (report.B_tilde - report.A_tilde) - (base.B - base.A)
    assert math.isclose(widening, 2.0 * 2 * 0.2 * r_delta(2.0), rel_tol=1e-12)
    assert "q(z) - q(w)" in report.offset_terms


def test_distance_implications_sampled_configurations():
    """No counterexamples to either implication over 50 admissible draws."""
    rng = random.Random(90300)
    for k in range(50):
        delta = rng.uniform(1.5, 3.0)
        spread = delta + math.sqrt(delta * delta - 1.0)
        outer_cap, _ = admissible_eps(delta, 1.0)
        eps_prime = rng.uniform(0.3, 0.95) * outer_cap
        eps = rng.uniform(0.3, 0.95) * eps_prime / spread
        assert check_lemma_bla(delta, eps, eps_prime, samples=2, seed=90400 + k)


def test_distance_implications_reject_inadmissible_radii():
    with pytest.raises(ConstraintViolation, match="inadmissible"):
        check_lemma_bla(2.0, 0.01, 0.6, samples=1)
    with pytest.raises(ConstraintViolation, match="inadmissible"):
        check_lemma_bla(2.0, 0.15, 0.2, samples=1)
