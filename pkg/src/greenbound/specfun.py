"""Special functions: Gauss series, log-gamma, Legendre evaluators, and the
explicit constants used by the spectral-side estimates.

Everything is computed in plain doubles with documented truncation rules:

* hyp2f1: direct power series, stop after three consecutive terms below
  1e-16 times the partial sum (and at least ten terms), error past 1e6 terms.
* legendre_P_negm: descending series in x = u + sqrt(u^2 - 1) with the
  reflection tan(pi s) Gamma(n - m + s) = (-1)^(n-m) pi / (cos(pi s)
  Gamma(m - n + 1 - s)) applied term by term, so the evaluation stays finite
  where the raw prefactor and the Gamma factors trade poles (in particular on
  the real boundary s = 1).  Geometric tail cutoff with ratio x^-2.
* log_gamma_complex: upward recurrence to Re z >= 10 followed by the
  Stirling asymptotic series with ten Bernoulli coefficients.

Evaluation near s = 1/2 is excluded for legendre_P_negm: the cos(pi s)
denominator vanishes there, so inputs with |Re s - 1/2| < 1e-3 and
|Im s| < 1e-3 are rejected rather than evaluated inaccurately.
"""

from __future__ import annotations

import cmath
import math

from greenbound.errors import NonConvergenceError

SQRT_PI = math.sqrt(math.pi)

_MAX_TERMS = 10**6

# Bernoulli coefficients B_{2k} / (2k (2k-1)) for the Stirling series.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma_complex(z: complex) -> complex:
    """log Gamma(z) via upward recurrence to Re z >= 10 plus the Stirling series.

    Raises at the poles (nonpositive real integers).  The imaginary part is
    only branch-normalized for Re z > 0; every use in this package either has
    Re z > 0 or exponentiates the result, which kills the 2 pi i ambiguity.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise ValueError(f"log Gamma pole at {z}")
    shift = 0.0 + 0.0j
    while z.real < 10.0:
        shift += cmath.log(z)
        z += 1.0
    w = 1.0 / z
    w2 = w * w
    series = 0.0 + 0.0j
    power = w
    for coeff in _STIRLING:
        series += coeff * power
        power *= w2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi) + series - shift


def _recip_gamma(z: complex) -> complex:
    """1 / Gamma(z), entire; exactly 0 at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0.0 + 0.0j
    if z.real >= 0.5:
        return cmath.exp(-log_gamma_complex(z))
    # Reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi.
    return cmath.sin(math.pi * z) * cmath.exp(log_gamma_complex(1.0 - z)) / math.pi


def hyp2f1(a: complex, b: complex, c: complex, z: float) -> complex:
    """Gauss hypergeometric series F(a, b; c; z) for real |z| < 1.

    Terms follow the ratio recurrence t_{n+1} = t_n (a+n)(b+n) z /
    ((c+n)(n+1)); summation stops once three consecutive terms fall below
    1e-16 times the partial sum (after at least ten terms).
    """
    if abs(z) >= 1.0:
        raise ValueError(f"hyp2f1 series requires |z| < 1, got z = {z}")
    c = complex(c)
    if _is_nonpositive_integer(c):
        raise ValueError(f"hyp2f1 undefined for c = {c}")
    a = complex(a)
    b = complex(b)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small_run = 0
    for n in range(_MAX_TERMS):
        term = term * (a + n) * (b + n) * z / ((c + n) * (n + 1))
        total += term
        if abs(term) < 1e-16 * abs(total):
            small_run += 1
            if small_run >= 3 and n > 10:
                return total
        else:
            small_run = 0
    raise NonConvergenceError(f"hyp2f1 did not converge for z = {z}")


def gauss_value(a: complex, b: complex, c: complex) -> complex:
    """F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).

    Requires Re c > 0 and Re(c - a - b) > 0 for convergence of the series it
    sums in closed form.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if not (c.real > 0.0):
        raise ValueError(f"gauss_value requires Re c > 0, got c = {c}")
    if not (c.real > (a + b).real):
        raise ValueError(f"gauss_value requires Re(c - a - b) > 0, got a={a}, b={b}, c={c}")
    log_value = (
        log_gamma_complex(c)
        + log_gamma_complex(c - a - b)
        - log_gamma_complex(c - a)
        - log_gamma_complex(c - b)
    )
    return cmath.exp(log_value)


def legendre_Q0(u: float) -> float:
    """Legendre function Q_0(u) = (1/2) log((u+1)/(u-1)) for u > 1."""
    if not (u > 1.0):
        raise ValueError(f"legendre_Q0 requires u > 1, got {u}")
    return 0.5 * math.log((u + 1.0) / (u - 1.0))


def legendre_P_neg1(s: complex, u: float) -> complex:
    """Order -1 Legendre function on the cut, hypergeometric form.

    P^{-1}_{s-1}(u) = sqrt((u-1)/(u+1)) F(s, 1-s; 2; (1-u)/2).

    The direct series converges only for u < 3 (argument in (-1, 0]), so the
    domain is restricted to 1 < u < 3.
    """
    if not (1.0 < u < 3.0):
        raise ValueError(f"legendre_P_neg1 requires 1 < u < 3, got u = {u}")
    s = complex(s)
    return math.sqrt((u - 1.0) / (u + 1.0)) * hyp2f1(s, 1.0 - s, 2.0, (1.0 - u) / 2.0)


def legendre_Q_deriv(nu: float, u: float) -> float:
    """Derivative Q_nu'(u) for nu >= 0, u > 1, in hypergeometric form.

    Q_nu'(u) = -(2/(u+1))^nu (u^2-1)^{-1} [Gamma(1+nu) Gamma(2+nu) /
    Gamma(2+2nu)] F(nu, 1+nu; 2+2nu; 2/(u+1)).

    Always negative: Q_nu decreases along (1, infinity).
    """
    if not (nu >= 0.0):
        raise ValueError(f"legendre_Q_deriv requires nu >= 0, got {nu}")
    if not (u > 1.0):
        raise ValueError(f"legendre_Q_deriv requires u > 1, got {u}")
    gamma_factor = math.exp(math.lgamma(1.0 + nu) + math.lgamma(2.0 + nu) - math.lgamma(2.0 + 2.0 * nu))
    f = hyp2f1(nu, 1.0 + nu, 2.0 + 2.0 * nu, 2.0 / (u + 1.0)).real
    return -((2.0 / (u + 1.0)) ** nu) / (u * u - 1.0) * gamma_factor * f


def legendre_P_negm(m: int, s: complex, u: float) -> complex:
    """Order -m Legendre function P^{-m}_{s-1}(u) for even m >= 0 and u > 1.

    Descending series in x = u + sqrt(u^2 - 1) > 1:

        P^{-m}_{s-1}(u) = sqrt(pi) / ((x - 1/x)^m cos(pi s)) *
            sum_n ((1/2 - m)_n / n!) (-1)^n [ G1(n) x^{m-s-2n}
                                              - G2(n) x^{m-1+s-2n} ],

    with G1(n) = 1/(Gamma(m-n+1-s) Gamma(n+1/2+s)) and
    G2(n) = 1/(Gamma(m-n+s) Gamma(n+3/2-s)).  This is the raw
    tan(pi s)-prefactored series with the reflection formula folded into each
    term, which keeps every factor finite: at s = 1 the reciprocal Gammas
    vanish on the former pole terms and the series terminates.

    The strip point s = 1/2 is a removable singularity handled analytically
    but not numerically; inputs within 1e-3 of it (both components) are
    rejected.
    """
    if m < 0 or m % 2 != 0:
        raise ValueError(f"legendre_P_negm supports even m >= 0 only, got m = {m}")
    if not (u > 1.0):
        raise ValueError(f"legendre_P_negm requires u > 1, got u = {u}")
    s = complex(s)
    if abs(s.real - 0.5) < 1e-3 and abs(s.imag) < 1e-3:
        raise ValueError(f"legendre_P_negm excluded zone around s = 1/2, got s = {s}")

    x = u + math.sqrt(u * u - 1.0)
    inv_x2 = 1.0 / (x * x)

    # x^{m-s} and x^{m-1+s}; each subsequent term carries another x^{-2}.
    pow1 = cmath.exp((m - s) * math.log(x))
    pow2 = cmath.exp((m - 1.0 + s) * math.log(x))

    g1 = _recip_gamma(m + 1.0 - s) * _recip_gamma(0.5 + s)
    g2 = _recip_gamma(m + 0.0 + s) * _recip_gamma(1.5 - s)

    coeff = 1.0  # (1/2 - m)_n / n!, signed
    sign = 1.0  # (-1)^n
    total = 0.0 + 0.0j
    for n in range(_MAX_TERMS):
        part1 = g1 * pow1
        part2 = g2 * pow2
        total += coeff * sign * (part1 - part2)
        if n >= m + 2:
            # For n >= m every factor ratio has modulus < 1, so both parts
            # decay at least geometrically with ratio x^-2; bound the tail by
            # the current part magnitudes rather than their difference, which
            # may cancel.
            tail = abs(coeff) * (abs(part1) + abs(part2)) * inv_x2 / (1.0 - inv_x2)
            if tail < 1e-15 * abs(total):
                break
        # Advance n -> n+1.
        coeff *= (0.5 - m + n) / (n + 1.0)
        sign = -sign
        pow1 *= inv_x2
        pow2 *= inv_x2
        g1 *= (m - n - s) / (n + 0.5 + s)
        g2 *= (m - n - 1.0 + s) / (n + 1.5 - s)
    else:
        raise NonConvergenceError(f"legendre_P_negm series did not converge at u = {u}")

    prefactor = SQRT_PI / ((x - 1.0 / x) ** m * cmath.cos(math.pi * s))
    return prefactor * total


def C_sigma(sigma: float) -> tuple[float, float]:
    """Strip constants (C_sigma, C_sigma') for 0 < sigma < 1/2.

    C_sigma  = max(1, tan(pi sigma)) (1/sigma - 1)^{1/4}
               exp(1/2 + 1/(24 sigma (1/2 + sigma)))
    C_sigma' = same with exp(1/2 + 1/(24 (1 - sigma) (3/2 - sigma))).
    """
    if not (0.0 < sigma < 0.5):
        raise ValueError(f"C_sigma requires 0 < sigma < 1/2, got {sigma}")
    common = max(1.0, math.tan(math.pi * sigma)) * (1.0 / sigma - 1.0) ** 0.25
    c_main = common * math.exp(0.5 + 1.0 / (24.0 * sigma * (0.5 + sigma)))
    c_prime = common * math.exp(0.5 + 1.0 / (24.0 * (1.0 - sigma) * (1.5 - sigma)))
    return c_main, c_prime


def p_sigma(sigma: float, u: float) -> float:
    """Envelope p_sigma(u) controlling |P^{-2}_{s-1}(u)| (u^2 - 1) on the strip.

    p_sigma(u) = (C_sigma x^{2-sigma} + C_sigma' x^{1+sigma}) / (4 sqrt(pi)) *
                 ((1 - x^{-2})^{3/2} + 3 x^{-2}),   x = u + sqrt(u^2 - 1),

    defined for u >= 1 (x = 1 gives the finite limit 3 (C + C') / (4 sqrt(pi))).
    """
    if not (u >= 1.0):
        raise ValueError(f"p_sigma requires u >= 1, got {u}")
    c_main, c_prime = C_sigma(sigma)
    x = u + math.sqrt(u * u - 1.0)
    inv_x2 = 1.0 / (x * x)
    shape = (1.0 - inv_x2) ** 1.5 + 3.0 * inv_x2
    return (c_main * x ** (2.0 - sigma) + c_prime * x ** (1.0 + sigma)) / (4.0 * SQRT_PI) * shape


def gamma_ratio_bounds(a: float, b: float, y: float) -> tuple[float, float]:
    """Two-sided sandwich for |Gamma(a + iy) / Gamma(b + iy)|, 0 < a <= b.

    core  = (a^2 + y^2)^{a/2 - 1/4} / (b^2 + y^2)^{b/2 - 1/4}
    lower = exp(-(1/12)(1/a - 1/b)) core
    upper = exp(b - a + (1/12)(1/a - 1/b)) core
    """
    if not (0.0 < a <= b):
        raise ValueError(f"gamma_ratio_bounds requires 0 < a <= b, got a={a}, b={b}")
    wiggle = (1.0 / a - 1.0 / b) / 12.0
    log_core = (0.5 * a - 0.25) * math.log(a * a + y * y) - (0.5 * b - 0.25) * math.log(b * b + y * y)
    return math.exp(-wiggle + log_core), math.exp(b - a + wiggle + log_core)


def gamma_ratio_upper(a: float, b: float, y: float) -> float:
    """Simplified decay bound exp(b - a + (1/12)(1/a - 1/b)) (a^2 + y^2)^{-(b-a)/2}.

    Valid for b >= a > 0 with b >= 1/2; always dominates the sharp sandwich
    upper bound because (b^2 + y^2)^{b/2 - 1/4} >= (a^2 + y^2)^{b/2 - 1/4}.
    """
    if not (b >= a > 0.0):
        raise ValueError(f"gamma_ratio_upper requires b >= a > 0, got a={a}, b={b}")
    if not (b >= 0.5):
        raise ValueError(f"gamma_ratio_upper requires b >= 1/2, got b = {b}")
    wiggle = (1.0 / a - 1.0 / b) / 12.0
    return math.exp(b - a + wiggle) * (a * a + y * y) ** (-(b - a) / 2.0)
