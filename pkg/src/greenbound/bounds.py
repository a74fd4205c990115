"""Assembly of the explicit two-sided Green function bounds.

The certificate has the shape

    A <= gr(z, w) + sum over close gamma of (L(u(z, gamma w)) - L(delta)) <= B

with

    A = -q_plus  - D_plus  * S(eta) * N_bar,
    B = -q_minus + D_minus * S(eta) * N_bar,

where q_pm are closed-form volume terms, D_pm are integrals of the
spectral-side majorants of the averaged transforms, S(eta) is the factor
translating eigenfunction sums into lattice counts for a spectral gap eta,
and N_bar is a uniform bound on the average of the two displacement counts
N(z, z, 17) and N(w, w, 17).

Two arithmetic modes are supported.  theorem-exact (the default) evaluates
q_pm in closed form and D_pm by adaptive quadrature with a certified tail,
and includes the pi/(2 pi - 4)^2 prefactor in the spectral factor.
paper-arithmetic reproduces the historical headline numbers: it plugs in
the rounded caps q_plus = 69.0, q_minus = -216, D_plus = 18.5,
D_minus = 9.61 and omits the prefactor.  theorem-exact always gives the
tighter certificate; paper-arithmetic exists only for reproduction.

The group volume follows the stack convention (integrals over the quotient
carry a factor 1/#(Gamma intersect {+-1})), so the modular group has
volume pi/6, half the hyperbolic area of its fundamental domain.  The q
forensics force this normalization; see the numeric checks in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from greenbound._quad import integrate_to_infinity
from greenbound.errors import ConstraintViolation
from greenbound.specfun import p_sigma
from greenbound.transforms import (
    TrapezoidParams,
    T_of_U,
    V_of_U,
    averaged_transform_tail,
)

# Spectral gap presets for congruence subgroups: Selberg's classical 3/16,
# and the bound (25/64)(39/64) = 975/4096 from the best known progress
# towards his eigenvalue conjecture.
ETA_SELBERG = 3.0 / 16.0
ETA_KIM_SARNAK = 975.0 / 4096.0

VOLUME_MODULAR = math.pi / 6.0  # stack volume of SL(2, Z) \ H
MIN_C_MODULAR = 1.0  # smallest positive lower-left entry over SL(2, Z)

# Rounded constants of the historical arithmetic (paper-arithmetic mode).
ROUNDED_Q_PLUS = 69.0
ROUNDED_Q_MINUS = -216.0
ROUNDED_D_PLUS = 18.5
ROUNDED_D_MINUS = 9.61
COUNT_CAP_STANDARD = 216.0  # certified N(z, z, 17) cap on the truncated domain
HEADLINE_A = -2.87e4
HEADLINE_B = 1.51e4

_MODES = ("theorem-exact", "paper-arithmetic")


@dataclass(frozen=True)
class GroupContext:
    """Group-level inputs: volume, spectral gap, -1 membership, cusp width floor.

    vol is the stack volume of the quotient; eta > 0 lower-bounds the
    nonzero spectrum of the Laplacian; min_c is the smallest positive value
    of the cusp-normalized lower-left entry over group elements outside the
    cusp stabilizer (1 for the modular group).
    """

    name: str
    vol: float
    eta: float
    contains_minus_one: bool
    min_c: float

    def __post_init__(self) -> None:
        if not (self.vol > 0.0 and math.isfinite(self.vol)):
            raise ConstraintViolation(f"group volume must be positive, got {self.vol}")
        if not (0.0 < self.eta <= 0.25):
            raise ConstraintViolation(f"spectral gap must lie in (0, 1/4], got {self.eta}")
        if not (self.min_c > 0.0 and math.isfinite(self.min_c)):
            raise ConstraintViolation(f"min_c must be positive, got {self.min_c}")


def group_preset(name: str) -> GroupContext:
    """Built-in group contexts; currently only "sl2z"."""
    if name == "sl2z":
        return GroupContext(
            name="sl2z",
            vol=VOLUME_MODULAR,
            eta=ETA_KIM_SARNAK,
            contains_minus_one=True,
            min_c=MIN_C_MODULAR,
        )
    raise ValueError(f"unknown group preset {name!r}; available: 'sl2z'")


def eta_presets() -> list[tuple[str, float]]:
    """Named spectral-gap presets, weakest first."""
    return [("selberg-3-16", ETA_SELBERG), ("kim-sarnak", ETA_KIM_SARNAK)]


@dataclass(frozen=True)
class ParamSet:
    """Full free-parameter set: trapezoid shape plus the strip abscissas.

    sigma_plus / sigma_minus are the real parts at which the averaged
    transforms are bounded on vertical lines.  Constructing a ParamSet
    checks the eta-free constraints 0 < alpha < sigma < 1/2 on both sides;
    validate() additionally checks sigma (1 - sigma) <= eta for a group.
    """

    trapezoid: TrapezoidParams
    sigma_plus: float
    sigma_minus: float

    def __post_init__(self) -> None:
        for label, alpha, sigma in (
            ("plus", self.trapezoid.alpha_plus, self.sigma_plus),
            ("minus", self.trapezoid.alpha_minus, self.sigma_minus),
        ):
            if not (alpha < sigma):
                raise ConstraintViolation(
                    f"sigma_{label} must exceed alpha_{label}: {sigma} <= {alpha}"
                )
            if not (sigma < 0.5):
                raise ConstraintViolation(f"sigma_{label} must be below 1/2, got {sigma}")

    @property
    def delta(self) -> float:
        return self.trapezoid.delta

    @property
    def alpha_plus(self) -> float:
        return self.trapezoid.alpha_plus

    @property
    def alpha_minus(self) -> float:
        return self.trapezoid.alpha_minus

    @property
    def beta_plus(self) -> float:
        return self.trapezoid.beta_plus

    @property
    def beta_minus(self) -> float:
        return self.trapezoid.beta_minus


def reference_params() -> ParamSet:
    """The tuned parameter set behind the headline certificate (delta = 2)."""
    return ParamSet(
        trapezoid=TrapezoidParams(
            delta=2.0,
            alpha_plus=0.0366,
            alpha_minus=2.96e-3,
            beta_plus=2.72,
            beta_minus=0.668,
        ),
        sigma_plus=0.306,
        sigma_minus=0.250,
    )


def sigma_ceiling(eta: float) -> float:
    """Largest sigma in (0, 1/2] with sigma (1 - sigma) <= eta."""
    if not (0.0 < eta <= 0.25):
        raise ConstraintViolation(f"spectral gap must lie in (0, 1/4], got {eta}")
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * eta))


def validate(params: ParamSet, ctx: GroupContext) -> ParamSet:
    """Check every certificate hypothesis in order; return params unchanged.

    Raises ConstraintViolation naming the first violated constraint.  The
    trapezoid and sign constraints are rechecked so that the full ordered
    list lives in one place.
    """
    t = params.trapezoid
    if not (t.delta > 1.0):
        raise ConstraintViolation(f"delta must exceed 1, got {t.delta}")
    for label, alpha, beta, sigma in (
        ("plus", t.alpha_plus, t.beta_plus, params.sigma_plus),
        ("minus", t.alpha_minus, t.beta_minus, params.sigma_minus),
    ):
        if not (alpha > 0.0):
            raise ConstraintViolation(f"alpha_{label} must be positive, got {alpha}")
        if not (beta > 0.0):
            raise ConstraintViolation(f"beta_{label} must be positive, got {beta}")
        if not (alpha < sigma):
            raise ConstraintViolation(
                f"sigma_{label} must exceed alpha_{label}: {sigma} <= {alpha}"
            )
        if not (sigma < 0.5):
            raise ConstraintViolation(f"sigma_{label} must be below 1/2, got {sigma}")
        if sigma * (1.0 - sigma) > ctx.eta:
            raise ConstraintViolation(
                f"sigma_{label} ({sigma}) has sigma (1 - sigma) = "
                f"{sigma * (1.0 - sigma):.6f} above the spectral gap {ctx.eta:.6f}"
            )
    cap = t.delta ** (1.0 + t.alpha_minus) / (t.delta + 1.0)
    if t.beta_minus > cap:
        raise ConstraintViolation(
            f"beta_minus ({t.beta_minus}) exceeds delta^(1+alpha_minus)/(delta+1) = {cap:.7f}"
        )
    return params


def compute_q(params: ParamSet, ctx: GroupContext) -> tuple[float, float]:
    """Closed-form volume terms (q_plus, q_minus); q_minus is always <= 0."""
    t = params.trapezoid
    log_term = math.log((t.delta + 1.0) / 2.0)
    q_plus = (t.beta_plus / (2.0 * t.alpha_plus * t.delta**t.alpha_plus) - log_term) / ctx.vol
    q_minus = -(t.beta_minus / (2.0 * t.alpha_minus * t.delta**t.alpha_minus) + log_term) / ctx.vol
    return q_plus, q_minus


def _D_one_sign(params: ParamSet, sign: int, rel_tol: float) -> float:
    t = params.trapezoid
    if sign > 0:
        sigma, alpha, beta = params.sigma_plus, t.alpha_plus, t.beta_plus

        def integrand(U: float) -> float:
            # past ~1e77 the intermediate powers overflow while the true
            # integrand (~U^{sigma+alpha-2}) underflows; the analytic tail
            # majorant covers everything from there on
            try:
                shifted = p_sigma(sigma, V_of_U(t, U)) + p_sigma(sigma, U)
                return shifted * U ** (1.0 + alpha) / (beta * (U * U - 1.0) ** 2)
            except OverflowError:
                return 0.0

    else:
        sigma, alpha, beta = params.sigma_minus, t.alpha_minus, t.beta_minus

        def integrand(U: float) -> float:
            try:
                shifted = p_sigma(sigma, U) + p_sigma(sigma, T_of_U(t, U))
                return shifted * U ** (1.0 + alpha) / (beta * (U * U - 1.0) ** 2)
            except OverflowError:
                return 0.0

    def tail(M: float) -> float:
        return averaged_transform_tail(t, sign, sigma, M)

    value, tail_bound = integrate_to_infinity(integrand, t.delta, tail, rel_tol)
    # Adding the certified tail keeps the reported value an upper estimate.
    return value + tail_bound


def compute_D(params: ParamSet, rel_tol: float = 1e-6) -> tuple[float, float]:
    """Majorant integrals (D_plus, D_minus) over [delta, infinity).

    Each value is adaptive quadrature plus the analytic bound for the
    truncated tail, so the results are upper estimates converging from
    above as rel_tol shrinks.
    """
    return _D_one_sign(params, +1, rel_tol), _D_one_sign(params, -1, rel_tol)


def spectral_factor(eta: float, include_phi_constant: bool) -> float:
    """Factor converting D_pm into count-weighted bound contributions.

    eta^(-5/4)/4 + 4 sqrt(2), times pi/(2 pi - 4)^2 when
    include_phi_constant is set.  The prefactor belongs to the certificate;
    omitting it reproduces the historical headline arithmetic.
    """
    if not (0.0 < eta <= 0.25):
        raise ConstraintViolation(f"spectral gap must lie in (0, 1/4], got {eta}")
    factor = eta ** (-1.25) / 4.0 + 4.0 * math.sqrt(2.0)
    if include_phi_constant:
        factor *= math.pi / (2.0 * math.pi - 4.0) ** 2
    return factor


@dataclass(frozen=True)
class BoundReport:
    """Assembled certificate; constructing one re-checks its sign structure."""

    q_plus: float
    q_minus: float
    D_plus: float
    D_minus: float
    N_bar: float
    spectral_factor: float
    A: float
    B: float
    mode: str

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ConstraintViolation(f"mode must be one of {_MODES}, got {self.mode!r}")
        if not (self.D_plus > 0.0 and self.D_minus > 0.0):
            raise ConstraintViolation(
                f"D values must be positive, got ({self.D_plus}, {self.D_minus})"
            )
        if not (self.q_minus <= 0.0 <= self.q_plus):
            raise ConstraintViolation(
                f"q values must satisfy q_minus <= 0 <= q_plus, got "
                f"({self.q_plus}, {self.q_minus})"
            )
        if not (self.A <= self.B):
            raise ConstraintViolation(f"certificate is empty: A = {self.A} > B = {self.B}")

    @property
    def width(self) -> float:
        return self.B - self.A


def assemble(
    params: ParamSet,
    ctx: GroupContext,
    N_bar: float,
    mode: str = "theorem-exact",
    rel_tol: float = 1e-6,
) -> BoundReport:
    """Build the certificate A <= . <= B for a uniform count bound N_bar.

    N_bar bounds the average (N(z, z, 17) + N(w, w, 17)) / 2 over the
    intended range of base points; it must be at least 2 (the identity
    pair is always counted).
    """
    if not (N_bar >= 2.0):
        raise ConstraintViolation(f"N_bar must be at least 2, got {N_bar}")
    validate(params, ctx)
    if mode == "paper-arithmetic":
        q_plus, q_minus = ROUNDED_Q_PLUS, ROUNDED_Q_MINUS
        D_plus, D_minus = ROUNDED_D_PLUS, ROUNDED_D_MINUS
        factor = spectral_factor(ctx.eta, include_phi_constant=False)
    elif mode == "theorem-exact":
        q_plus, q_minus = compute_q(params, ctx)
        D_plus, D_minus = compute_D(params, rel_tol=rel_tol)
        factor = spectral_factor(ctx.eta, include_phi_constant=True)
    else:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    A = -q_plus - D_plus * factor * N_bar
    B = -q_minus + D_minus * factor * N_bar
    return BoundReport(
        q_plus=q_plus,
        q_minus=q_minus,
        D_plus=D_plus,
        D_minus=D_minus,
        N_bar=N_bar,
        spectral_factor=factor,
        A=A,
        B=B,
        mode=mode,
    )
