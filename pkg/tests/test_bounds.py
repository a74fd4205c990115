"""Constant assembly: volume terms, majorant integrals, and the certificate."""

import math
import random

import pytest

from greenbound.bounds import (
    COUNT_CAP_STANDARD,
    ETA_KIM_SARNAK,
    ETA_SELBERG,
    HEADLINE_A,
    HEADLINE_B,
    MIN_C_MODULAR,
    ROUNDED_D_MINUS,
    ROUNDED_D_PLUS,
    ROUNDED_Q_MINUS,
    ROUNDED_Q_PLUS,
    VOLUME_MODULAR,
    BoundReport,
    GroupContext,
    ParamSet,
    assemble,
    compute_D,
    compute_q,
    eta_presets,
    group_preset,
    reference_params,
    sigma_ceiling,
    spectral_factor,
    validate,
)
from greenbound.errors import ConstraintViolation
from greenbound.transforms import TrapezoidParams


def test_module_constants():
    assert VOLUME_MODULAR == math.pi / 6.0
    assert MIN_C_MODULAR == 1.0
    assert ETA_SELBERG == 3.0 / 16.0
    assert ETA_KIM_SARNAK == 975.0 / 4096.0
    assert (ROUNDED_Q_PLUS, ROUNDED_Q_MINUS) == (69.0, -216.0)
    assert (ROUNDED_D_PLUS, ROUNDED_D_MINUS) == (18.5, 9.61)
    assert COUNT_CAP_STANDARD == 216.0
    assert (HEADLINE_A, HEADLINE_B) == (-2.87e4, 1.51e4)


def test_group_preset_sl2z():
    ctx = group_preset("sl2z")
    assert ctx.name == "sl2z"
    assert ctx.vol == VOLUME_MODULAR
    assert ctx.eta == ETA_KIM_SARNAK
    assert ctx.contains_minus_one is True
    assert ctx.min_c == 1.0
    with pytest.raises(ValueError, match="unknown group preset"):
        group_preset("psl2z")


def test_group_context_validation():
    with pytest.raises(ConstraintViolation, match="volume"):
        GroupContext(name="x", vol=0.0, eta=0.2, contains_minus_one=True, min_c=1.0)
    with pytest.raises(ConstraintViolation, match="spectral gap"):
        GroupContext(name="x", vol=1.0, eta=0.3, contains_minus_one=True, min_c=1.0)
    with pytest.raises(ConstraintViolation, match="min_c"):
        GroupContext(name="x", vol=1.0, eta=0.2, contains_minus_one=True, min_c=0.0)


def test_eta_presets_ordering():
    presets = eta_presets()
    assert presets[0] == ("selberg-3-16", 3.0 / 16.0)
    assert presets[1] == ("kim-sarnak", 975.0 / 4096.0)
    assert presets[0][1] < presets[1][1]


def test_sigma_ceiling_values():
    assert sigma_ceiling(975.0 / 4096.0) == 0.390625
    assert sigma_ceiling(3.0 / 16.0) == 0.25
    assert sigma_ceiling(0.25) == 0.5
    with pytest.raises(ConstraintViolation):
        sigma_ceiling(0.0)
    with pytest.raises(ConstraintViolation):
        sigma_ceiling(0.26)


def test_reference_params_values():
    p = reference_params()
    assert p.delta == 2.0
    assert p.alpha_plus == 0.0366
    assert p.alpha_minus == 2.96e-3
    assert p.beta_plus == 2.72
    assert p.beta_minus == 0.668
    assert p.sigma_plus == 0.306
    assert p.sigma_minus == 0.250
    validate(p, group_preset("sl2z"))


def test_param_set_constraints():
    t = TrapezoidParams(delta=2.0, alpha_plus=0.1, alpha_minus=0.1, beta_plus=1.0, beta_minus=0.1)
    with pytest.raises(ConstraintViolation, match="sigma_plus must exceed alpha_plus"):
        ParamSet(trapezoid=t, sigma_plus=0.05, sigma_minus=0.2)
    with pytest.raises(ConstraintViolation, match="sigma_minus must be below 1/2"):
        ParamSet(trapezoid=t, sigma_plus=0.2, sigma_minus=0.5)
    p = ParamSet(trapezoid=t, sigma_plus=0.2, sigma_minus=0.3)
    assert (p.delta, p.alpha_plus, p.beta_minus) == (2.0, 0.1, 0.1)


def test_validate_checks_spectral_gap():
    ctx = group_preset("sl2z")
    t = TrapezoidParams(delta=2.0, alpha_plus=0.1, alpha_minus=0.1, beta_plus=1.0, beta_minus=0.1)
    good = ParamSet(trapezoid=t, sigma_plus=0.39, sigma_minus=0.39)
    assert validate(good, ctx) is good
    bad = ParamSet(trapezoid=t, sigma_plus=0.45, sigma_minus=0.2)
    with pytest.raises(ConstraintViolation, match="sigma_plus.*spectral gap"):
        validate(bad, ctx)
    # the plus side is reported first when both sides violate
    both = ParamSet(trapezoid=t, sigma_plus=0.45, sigma_minus=0.45)
    with pytest.raises(ConstraintViolation, match="sigma_plus"):
        validate(both, ctx)
    # a tighter gap rejects what kim-sarnak accepts
    selberg = GroupContext(
        name="x", vol=ctx.vol, eta=ETA_SELBERG, contains_minus_one=True, min_c=1.0
    )
    with pytest.raises(ConstraintViolation, match="spectral gap"):
        validate(reference_params(), selberg)


def test_volume_terms_reference_values():
    q_plus, q_minus = compute_q(reference_params(), group_preset("sl2z"))
    assert math.isclose(q_plus, 68.415327491868, rel_tol=1e-12)
    assert math.isclose(q_minus, -215.83707676492415, rel_tol=1e-12)
    # rounded caps used by the headline arithmetic
    assert q_plus < ROUNDED_Q_PLUS
    assert q_minus > ROUNDED_Q_MINUS


def test_volume_terms_closed_form():
    ctx = group_preset("sl2z")
    t = TrapezoidParams(delta=3.0, alpha_plus=0.2, alpha_minus=0.1, beta_plus=1.5, beta_minus=0.8)
    p = ParamSet(trapezoid=t, sigma_plus=0.3, sigma_minus=0.3)
    q_plus, q_minus = compute_q(p, ctx)
    log_term = math.log(2.0)
    assert math.isclose(q_plus, (1.5 / (2.0 * 0.2 * 3.0**0.2) - log_term) / ctx.vol, rel_tol=1e-14)
    assert math.isclose(q_minus, -(0.8 / (2.0 * 0.1 * 3.0**0.1) + log_term) / ctx.vol, rel_tol=1e-14)
    assert q_minus <= 0.0


def test_majorant_integrals_reference_values():
    """Documented computed values; D_plus genuinely exceeds its rounded cap."""
    D_plus, D_minus = compute_D(reference_params())
    assert math.isclose(D_plus, 18.56382172154982, rel_tol=1e-6)
    assert math.isclose(D_minus, 9.601877877076772, rel_tol=1e-6)
    assert D_minus <= ROUNDED_D_MINUS
    assert D_plus > ROUNDED_D_PLUS  # the rounded cap understates the integral


def test_majorant_integrals_stable_under_tolerance_halving():
    p = reference_params()
    base = compute_D(p, rel_tol=1e-6)
    halved = compute_D(p, rel_tol=5e-7)
    for coarse, fine in zip(base, halved):
        assert abs(coarse - fine) <= 1e-4 * abs(fine)
        # tightening the tolerance can only lower the upper estimate
        assert fine <= coarse + 1e-12 * abs(coarse)


def test_spectral_factor_values():
    bare = spectral_factor(ETA_KIM_SARNAK, include_phi_constant=False)
    full = spectral_factor(ETA_KIM_SARNAK, include_phi_constant=True)
    assert math.isclose(bare, 7.160460678635234, rel_tol=1e-15)
    assert math.isclose(full, 4.315275373722399, rel_tol=1e-15)
    assert math.isclose(full / bare, math.pi / (2.0 * math.pi - 4.0) ** 2, rel_tol=1e-15)
    with pytest.raises(ConstraintViolation):
        spectral_factor(0.3, include_phi_constant=True)


def test_paper_arithmetic_reproduction():
    report = assemble(reference_params(), group_preset("sl2z"), 216.0, "paper-arithmetic")
    assert abs(report.A - (-28682.0)) <= 100.0
    assert abs(report.B - 15080.0) <= 100.0
    assert report.mode == "paper-arithmetic"
    assert (report.q_plus, report.q_minus) == (69.0, -216.0)
    assert (report.D_plus, report.D_minus) == (18.5, 9.61)


def test_theorem_exact_is_strictly_tighter():
    report = assemble(reference_params(), group_preset("sl2z"), 216.0, "theorem-exact")
    assert report.A > HEADLINE_A
    assert report.B < HEADLINE_B
    assert report.mode == "theorem-exact"
    assert report.width < HEADLINE_B - HEADLINE_A


def test_count_cap_monotonicity():
    p = reference_params()
    ctx = group_preset("sl2z")
    tight = assemble(p, ctx, 216.0, "paper-arithmetic")
    loose = assemble(p, ctx, 300.0, "paper-arithmetic")
    assert loose.A < tight.A
    assert loose.B > tight.B
    exact_tight = assemble(p, ctx, 216.0, "theorem-exact", rel_tol=1e-5)
    exact_loose = assemble(p, ctx, 300.0, "theorem-exact", rel_tol=1e-5)
    assert exact_loose.A < exact_tight.A
    assert exact_loose.B > exact_tight.B


def test_assemble_input_checks():
    p = reference_params()
    ctx = group_preset("sl2z")
    with pytest.raises(ConstraintViolation, match="N_bar"):
        assemble(p, ctx, 1.0)
    with pytest.raises(ValueError, match="mode"):
        assemble(p, ctx, 216.0, "rounded")


def test_report_validation():
    kwargs = dict(
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
    report = BoundReport(**kwargs)
    assert report.width == 4.0
    with pytest.raises(ConstraintViolation, match="mode"):
        BoundReport(**{**kwargs, "mode": "loose"})
    with pytest.raises(ConstraintViolation, match="D values"):
        BoundReport(**{**kwargs, "D_plus": 0.0})
    with pytest.raises(ConstraintViolation, match="q values"):
        BoundReport(**{**kwargs, "q_plus": -0.5})
    with pytest.raises(ConstraintViolation, match="empty"):
        BoundReport(**{**kwargs, "A": 2.0})


def test_majorant_integral_reports_nonconvergence_honestly():
    """With sigma barely above alpha the tail cannot close in double
    precision; that must surface as the convergence error, not a crash."""
    from greenbound.errors import NonConvergenceError

    t = TrapezoidParams(delta=2.0, alpha_plus=0.3, alpha_minus=0.1, beta_plus=1.0, beta_minus=0.1)
    p = ParamSet(trapezoid=t, sigma_plus=0.302, sigma_minus=0.3)
    with pytest.raises(NonConvergenceError):
        compute_D(p, rel_tol=1e-6)


def draw_valid_params(rng):
    delta = rng.uniform(1.3, 3.0)
    alpha_plus = rng.uniform(0.01, 0.2)
    alpha_minus = rng.uniform(0.01, 0.2)
    beta_plus = rng.uniform(0.5, 3.0)
    cap = delta ** (1.0 + alpha_minus) / (delta + 1.0)
    beta_minus = rng.uniform(0.1, 0.999) * cap
    trapezoid = TrapezoidParams(
        delta=delta,
        alpha_plus=alpha_plus,
        alpha_minus=alpha_minus,
        beta_plus=beta_plus,
        beta_minus=beta_minus,
    )
    # keep sigma well above alpha so the tail majorant closes quickly
    sigma_plus = rng.uniform(alpha_plus + 0.12, 0.38)
    sigma_minus = rng.uniform(alpha_minus + 0.12, 0.38)
    return ParamSet(trapezoid=trapezoid, sigma_plus=sigma_plus, sigma_minus=sigma_minus)


def test_random_valid_params_pass_validation():
    ctx = group_preset("sl2z")
    rng = random.Random(80100)
    for _ in range(100):
        p = draw_valid_params(rng)
        assert validate(p, ctx) is p


def test_random_certificates_are_ordered():
    """Assembled intervals are nonempty and scale monotonically in N_bar."""
    ctx = group_preset("sl2z")
    rng = random.Random(80200)
    for _ in range(20):
        p = draw_valid_params(rng)
        report = assemble(p, ctx, 216.0, "theorem-exact", rel_tol=1e-4)
        assert report.A <= report.B
        assert report.D_plus > 0.0 and report.D_minus > 0.0
        assert report.q_minus <= 0.0 <= report.q_plus
        assert report.width > 0.0
