"""Spherical-transform layer: sharp and trapezoid cutoff kernels and their
spectral transforms, plus the resolvent transform.

A radial kernel g(u) has spectral transform h(s) = 2 pi Integral g(u)
P_{s-1}(u) du.  Three families appear:

* sharp cutoff g_U = indicator of [1, U]:
      h_U(s) = 2 pi sqrt(U^2 - 1) P^{-1}_{s-1}(U);
* trapezoid cutoffs g_U^- <= g_U <= g_U^+ with corners at T(U) < U < V(U):
      h_U^+(s) = 2 pi [(V^2-1) P^{-2}_{s-1}(V) - (U^2-1) P^{-2}_{s-1}(U)] / (V - U),
      h_U^-(s) = 2 pi [(U^2-1) P^{-2}_{s-1}(U) - (T^2-1) P^{-2}_{s-1}(T)] / (U - T),
  with the boundary values h_U^+(1) = 2 pi (U-1) + pi (V-U) and
  h_U^-(1) = 2 pi (U-1) - pi (U-T);
* resolvent h_a(s) = 1 / (s(1-s) + a(a-1)).

The corner functions are

    T(U) = U - beta^- U^{-1-alpha^-} (U^2 - 1),
    V(U) = U + beta^+ U^{-1-alpha^+} (U^2 - 1),

and beta^- <= delta^{1+alpha^-} / (delta + 1) guarantees T(U) >= 1 for
U >= delta.

The averaged transforms I_delta^{+-}(s) = (1/2 pi) Integral_delta^infinity
h_U^{+-}(s) / (U^2 - 1) dU are evaluated by adaptive quadrature over
geometric panels; the integrand decays like U^{alpha - sigma - 1}, so the
remaining tail past the last panel is bounded in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from greenbound._quad import integrate_to_infinity
from greenbound.errors import ConstraintViolation, NonConvergenceError
from greenbound.specfun import C_sigma, SQRT_PI, legendre_P_neg1, legendre_P_negm, p_sigma

TWO_PI = 2.0 * math.pi

# Below this margin the lower trapezoid corner T is numerically at the kernel
# edge u = 1 and its (T^2 - 1) P^{-2}(T) contribution is O((T-1)^2).
_T_EDGE = 1.0 + 1e-9


@dataclass(frozen=True)
class TrapezoidParams:
    """Parameters (delta, alpha^{+-}, beta^{+-}) of the trapezoid smoothing.

    Constraints: delta > 1, 0 < alpha^{+-} < 1/2, beta^{+-} > 0, and the
    corner criterion beta^- <= delta^{1+alpha^-} / (delta + 1).
    """

    delta: float
    alpha_plus: float
    alpha_minus: float
    beta_plus: float
    beta_minus: float

    def __post_init__(self) -> None:
        if not (self.delta > 1.0):
            raise ConstraintViolation(f"delta > 1 violated: delta = {self.delta}")
        if not (0.0 < self.alpha_plus < 0.5):
            raise ConstraintViolation(f"0 < alpha_plus < 1/2 violated: {self.alpha_plus}")
        if not (0.0 < self.alpha_minus < 0.5):
            raise ConstraintViolation(f"0 < alpha_minus < 1/2 violated: {self.alpha_minus}")
        if not (self.beta_plus > 0.0):
            raise ConstraintViolation(f"beta_plus > 0 violated: {self.beta_plus}")
        if not (self.beta_minus > 0.0):
            raise ConstraintViolation(f"beta_minus > 0 violated: {self.beta_minus}")
        cap = self.delta ** (1.0 + self.alpha_minus) / (self.delta + 1.0)
        if not (self.beta_minus <= cap):
            raise ConstraintViolation(
                f"beta_minus <= delta^(1+alpha_minus)/(delta+1) violated: {self.beta_minus} > {cap}"
            )


def T_of_U(params: TrapezoidParams, U: float) -> float:
    """Lower trapezoid corner T(U) = U - beta^- U^{-1-alpha^-} (U^2 - 1); needs U >= delta."""
    if not (U >= params.delta):
        raise ValueError(f"T_of_U requires U >= delta = {params.delta}, got U = {U}")
    return U - params.beta_minus * U ** (-1.0 - params.alpha_minus) * (U * U - 1.0)


def V_of_U(params: TrapezoidParams, U: float) -> float:
    """Upper trapezoid corner V(U) = U + beta^+ U^{-1-alpha^+} (U^2 - 1); needs U >= 1."""
    if not (U >= 1.0):
        raise ValueError(f"V_of_U requires U >= 1, got U = {U}")
    return U + params.beta_plus * U ** (-1.0 - params.alpha_plus) * (U * U - 1.0)


def g_U_pm(params: TrapezoidParams, sign: int, u: float, U: float) -> float:
    """Trapezoid kernel value g_U^{+-}(u): 1 up to the inner corner, linear to 0."""
    if u < 1.0:
        raise ValueError(f"g_U_pm requires u >= 1, got {u}")
    if sign == +1:
        V = V_of_U(params, U)
        if u <= U:
            return 1.0
        if u >= V:
            return 0.0
        return (V - u) / (V - U)
    if sign == -1:
        T = T_of_U(params, U)
        if u <= T:
            return 1.0
        if u >= U:
            return 0.0
        return (U - u) / (U - T)
    raise ValueError(f"sign must be +1 or -1, got {sign}")


def h_U(s: complex, U: float) -> complex:
    """Sharp-cutoff transform h_U(s) = 2 pi sqrt(U^2 - 1) P^{-1}_{s-1}(U) for 1 < U < 3.

    Real whenever s(1-s) is real and nonnegative; at s = 1 it collapses to
    the disc area 2 pi (U - 1).
    """
    if not (1.0 < U < 3.0):
        raise ValueError(f"h_U requires 1 < U < 3, got U = {U}")
    return TWO_PI * math.sqrt(U * U - 1.0) * legendre_P_neg1(s, U)


def h_U_pm(params: TrapezoidParams, sign: int, s: complex, U: float) -> complex:
    """Trapezoid transform h_U^{+-}(s) via the order -2 Legendre difference quotient.

    The minus side needs U >= delta so that T(U) >= 1; when T lands exactly on
    the kernel edge its (T^2 - 1) P^{-2}_{s-1}(T) term is zero to well below
    double precision and is dropped.
    """
    if sign == +1:
        if not (U > 1.0):
            raise ValueError(f"h_U_pm(+1) requires U > 1, got U = {U}")
        V = V_of_U(params, U)
        top = (V * V - 1.0) * legendre_P_negm(2, s, V) - (U * U - 1.0) * legendre_P_negm(2, s, U)
        return TWO_PI * top / (V - U)
    if sign == -1:
        T = T_of_U(params, U)
        if U <= 1.0:
            raise ValueError(f"h_U_pm(-1) requires U > 1, got U = {U}")
        term_T = 0.0 + 0.0j if T <= _T_EDGE else (T * T - 1.0) * legendre_P_negm(2, s, T)
        top = (U * U - 1.0) * legendre_P_negm(2, s, U) - term_T
        return TWO_PI * top / (U - T)
    raise ValueError(f"sign must be +1 or -1, got {sign}")


def h_U_pm_at_one(params: TrapezoidParams, sign: int, U: float) -> float:
    """Boundary values h_U^+(1) = 2 pi (U-1) + pi (V-U), h_U^-(1) = 2 pi (U-1) - pi (U-T)."""
    if sign == +1:
        return TWO_PI * (U - 1.0) + math.pi * (V_of_U(params, U) - U)
    if sign == -1:
        return TWO_PI * (U - 1.0) - math.pi * (U - T_of_U(params, U))
    raise ValueError(f"sign must be +1 or -1, got {sign}")


def h_a(a: float, s: complex) -> complex:
    """Resolvent transform h_a(s) = 1 / (s(1-s) + a(a-1)); poles at s = a and s = 1-a."""
    s = complex(s)
    den = s * (1.0 - s) + a * (a - 1.0)
    if den == 0:
        raise ValueError(f"h_a pole at s = {s} for a = {a}")
    return 1.0 / den


def c_a_coefficient(a: float, vol: float) -> float:
    """Normalizing constant c_a = 1 / (vol a (a-1)) of the resolvent kernel, a > 1."""
    if not (a > 1.0):
        raise ValueError(f"c_a_coefficient requires a > 1, got {a}")
    if not (vol > 0.0):
        raise ValueError(f"c_a_coefficient requires vol > 0, got {vol}")
    return 1.0 / (vol * a * (a - 1.0))


def resolvent_difference(a: float, b: float, s: complex, variant: str = "displayed") -> complex:
    """Closed forms for h_a(s) - h_b(s).

    variant="displayed" evaluates
        (b(b-1) - a(a-1)) / ((a-s)(a-1+s)(b-s)(b+1-s))
    exactly as stated in the source derivation; variant="factored" replaces
    the last factor by (b-1+s), which is what expanding
    (b-s)(b-1+s) = s(1-s) + b(b-1) actually yields.  The unit tests compare
    both against direct subtraction and record which one matches.
    """
    s = complex(s)
    num = b * (b - 1.0) - a * (a - 1.0)
    if variant == "displayed":
        last = b + 1.0 - s
    elif variant == "factored":
        last = b - 1.0 + s
    else:
        raise ValueError(f"unknown variant {variant!r}")
    den = (a - s) * (a - 1.0 + s) * (b - s) * last
    if den == 0:
        raise ValueError(f"resolvent_difference pole at s = {s}")
    return num / den


def _tail_majorant_coefficient(params: TrapezoidParams, sign: int, sigma: float) -> float:
    """Coefficient K with Integral_M^inf (p(V or T) + p(U)) U^{1+alpha} / (U^2-1)^2 dU
    <= K (1 - M^-2)^-2 M^{alpha-sigma} / (sigma - alpha) / beta for M >= delta.

    Uses p_sigma(u) <= 3 (C + C') (2u)^{2-sigma} / (4 sqrt(pi)), V <= kappa U
    with kappa = 1 + beta^+ delta^{-alpha^+}, and T <= U.
    """
    c_main, c_prime = C_sigma(sigma)
    p0 = 3.0 * (c_main + c_prime) * 2.0 ** (2.0 - sigma) / (4.0 * SQRT_PI)
    if sign == +1:
        kappa = 1.0 + params.beta_plus * params.delta ** (-params.alpha_plus)
        beta = params.beta_plus
        scale = kappa ** (2.0 - sigma) + 1.0
    else:
        beta = params.beta_minus
        scale = 2.0
    return p0 * scale / beta


def averaged_transform_tail(
    params: TrapezoidParams, sign: int, sigma: float, M: float, s_factor: float = 1.0
) -> float:
    """Analytic bound on |(1/2 pi) Integral_M^inf h_U^{+-}(s) / (U^2-1) dU|.

    Requires sigma > alpha for integrability; s_factor should carry the
    |s(1-s)|^{-5/4} of the strip bound (1.0 when bounding the D integrals,
    which already strip it off).
    """
    alpha = params.alpha_plus if sign == +1 else params.alpha_minus
    if not (sigma > alpha):
        raise NonConvergenceError(
            f"tail bound needs sigma > alpha, got sigma = {sigma}, alpha = {alpha}"
        )
    coeff = _tail_majorant_coefficient(params, sign, sigma)
    geometry = (1.0 - M ** -2.0) ** -2.0
    return s_factor * coeff * geometry * M ** (alpha - sigma) / (sigma - alpha)


def I_delta_pm(params: TrapezoidParams, sign: int, s: complex, rel_tol: float = 1e-8) -> complex:
    """Averaged transform I_delta^{+-}(s) = (1/2 pi) Integral_delta^inf h_U^{+-}(s)/(U^2-1) dU.

    Defined on the open strip 0 < Re s < 1.  The quadrature marches over
    geometric panels until the closed-form tail majorant falls below rel_tol
    of the accumulated mass; the tail enters the error budget only (the
    returned value is the plain quadrature estimate).
    """
    s = complex(s)
    if not (0.0 < s.real < 1.0):
        raise ValueError(f"I_delta_pm requires 0 < Re s < 1, got s = {s}")
    sigma_eff = min(s.real, 1.0 - s.real, 0.49)
    lam = abs(s * (1.0 - s))
    s_factor = lam ** -1.25 if lam > 0 else math.inf

    def integrand(U: float) -> complex:
        return h_U_pm(params, sign, s, U) / (U * U - 1.0)

    def tail(M: float) -> float:
        # averaged_transform_tail bounds the tail of the (1/2 pi)-normalized
        # integral; the march integrates the unnormalized integrand.
        return TWO_PI * averaged_transform_tail(params, sign, sigma_eff, M, s_factor)

    value, _tail_bound = integrate_to_infinity(integrand, params.delta, tail, rel_tol)
    return value / TWO_PI
