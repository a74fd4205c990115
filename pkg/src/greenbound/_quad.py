"""Adaptive Simpson quadrature used throughout the numeric pipeline.

Plain doubles, deterministic refinement order, no randomness.  Improper
integrals over [a, infinity) march over geometrically growing panels and stop
once a caller-supplied analytic bound on the remaining tail drops below the
requested tolerance; the tail bound is returned so callers that need a
one-sided (upper) estimate can add it to the quadrature value.
"""

from __future__ import annotations

import math
from typing import Callable

from greenbound.errors import NonConvergenceError

_MAX_DEPTH = 60


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h * (fa + 4.0 * fm + fb) / 6.0


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    err = left + right - whole
    if depth <= 0:
        raise NonConvergenceError(f"adaptive Simpson hit max depth on [{a}, {b}]")
    if abs(err) <= 15.0 * tol:
        # Accept with the standard Richardson correction.
        return left + right + err / 15.0
    return _adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _adaptive(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def integrate(f: Callable[[float], float], a: float, b: float, abs_tol: float) -> float:
    """Integrate f over [a, b] to absolute tolerance abs_tol."""
    if not (b >= a):
        raise ValueError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, b - a)
    return _adaptive(f, a, b, fa, fm, fb, whole, abs_tol, _MAX_DEPTH)


def integrate_relative(f: Callable[[float], float], a: float, b: float, rel_tol: float) -> float:
    """Integrate f over [a, b] to relative tolerance rel_tol.

    A coarse Simpson pass sets the scale; the scale is floored to protect
    against a vanishing first estimate.
    """
    if a == b:
        return 0.0
    n = 16
    h = (b - a) / n
    coarse = 0.0
    for i in range(n):
        x0 = a + i * h
        coarse += _simpson(f(x0), f(x0 + 0.5 * h), f(x0 + h), h)
    scale = max(abs(coarse), 1e-300)
    return integrate(f, a, b, rel_tol * scale)


def integrate_to_infinity(
    f: Callable[[float], float],
    a: float,
    tail_bound: Callable[[float], float],
    rel_tol: float,
    max_doublings: int = 400,
) -> tuple[float, float]:
    """Integrate f over [a, infinity) against an analytic tail majorant.

    tail_bound(M) must dominate |integral of f over [M, infinity)| and decay
    to 0.  Panels [M, 2M] are integrated until tail_bound(M) < rel_tol times
    the accumulated absolute mass (with an absolute floor).  Returns
    (value over [a, M], tail_bound(M)); the caller decides whether the tail
    belongs in the value or only in the error budget.
    """
    total = 0.0
    mass = 0.0
    lo = a
    hi = 2.0 * a if a > 0 else 1.0
    for _ in range(max_doublings):
        piece = integrate_relative(f, lo, hi, rel_tol)
        total += piece
        mass += abs(piece)
        bound = tail_bound(hi)
        if bound <= rel_tol * max(mass, 1e-300):
            return total, bound
        lo, hi = hi, 2.0 * hi
        if not math.isfinite(hi):
            break
    raise NonConvergenceError("tail bound cannot reach tolerance on [a, infinity)")
