"""Derivative-free tuning of the certificate parameters.

The six free parameters (alpha_plus, beta_plus, sigma_plus, alpha_minus,
beta_minus, sigma_minus) enter the bounds through closed forms and through
quadrature, so no gradients are available.  The search is plain coordinate
descent in log-space: each coordinate is scaled up or down by a
multiplicative step, infeasible candidates are projected back onto the
constraint set where a projection is canonical (the beta_minus cap and the
sigma window) and skipped otherwise, and the per-coordinate step shrinks
whenever neither direction improves the objective.  Deterministic by
construction: no randomness, strict-improvement moves, fixed coordinate
order.

The majorant integrals dominate the cost, so they are memoized per sign on
the parameters they actually depend on; stepping a plus-side coordinate
never recomputes the minus-side integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from greenbound.bounds import (
    BoundReport,
    GroupContext,
    ParamSet,
    _D_one_sign,
    compute_q,
    sigma_ceiling,
    spectral_factor,
    validate,
)
from greenbound.errors import ConstraintViolation, NonConvergenceError
from greenbound.transforms import TrapezoidParams

INITIAL_STEP = 1.3  # starting multiplicative step for every coordinate
STEP_FLOOR = 1e-3  # stop once every relative step is below this
_OBJECTIVES = ("width", "max-abs")
_COORDINATES = (
    "alpha_plus",
    "beta_plus",
    "sigma_plus",
    "alpha_minus",
    "beta_minus",
    "sigma_minus",
)
_BETA_CAP_MARGIN = 1.0 - 1e-9
_SIGMA_FLOOR_REL = 1e-6
_D_REL_TOL = 1e-6
_KEY_DIGITS = 12


@dataclass(frozen=True)
class SearchConfig:
    """Search settings: objective, iteration budget, step decay, start point.

    The seed evaluation counts as the first iteration, so max_iters = 1
    returns the validated seed without moving.
    """

    objective: str
    max_iters: int
    step_shrink: float
    seed_params: ParamSet

    def __post_init__(self) -> None:
        if self.objective not in _OBJECTIVES:
            raise ConstraintViolation(
                f"objective must be one of {_OBJECTIVES}, got {self.objective!r}"
            )
        if self.max_iters < 1:
            raise ConstraintViolation(f"max_iters must be at least 1, got {self.max_iters}")
        if not (0.0 < self.step_shrink < 1.0):
            raise ConstraintViolation(f"step_shrink must lie in (0, 1), got {self.step_shrink}")


def _make_params(delta: float, values: dict[str, float], sigma_max: float) -> ParamSet:
    """Project the raw coordinate values onto the feasible set and build a ParamSet.

    beta_minus is clipped just below its cap, and each sigma is clipped into
    (alpha, sigma_max].  Anything still infeasible (for example alpha at or
    above sigma_max) surfaces as a ConstraintViolation from the constructors.
    """
    v = dict(values)
    cap = delta ** (1.0 + v["alpha_minus"]) / (delta + 1.0)
    v["beta_minus"] = min(v["beta_minus"], _BETA_CAP_MARGIN * cap)
    for side in ("plus", "minus"):
        alpha = v[f"alpha_{side}"]
        floor = alpha * (1.0 + _SIGMA_FLOOR_REL)
        v[f"sigma_{side}"] = min(max(v[f"sigma_{side}"], floor), sigma_max)
    return ParamSet(
        trapezoid=TrapezoidParams(
            delta=delta,
            alpha_plus=v["alpha_plus"],
            alpha_minus=v["alpha_minus"],
            beta_plus=v["beta_plus"],
            beta_minus=v["beta_minus"],
        ),
        sigma_plus=v["sigma_plus"],
        sigma_minus=v["sigma_minus"],
    )


def _coordinate_values(params: ParamSet) -> dict[str, float]:
    return {name: getattr(params, name) for name in _COORDINATES}


def _cached_D(params: ParamSet, sign: int, cache: dict) -> float:
    t = params.trapezoid
    if sign > 0:
        raw = (t.delta, t.alpha_plus, t.beta_plus, params.sigma_plus)
    else:
        raw = (t.delta, t.alpha_minus, t.beta_minus, params.sigma_minus)
    key = (sign,) + tuple(round(x, _KEY_DIGITS) for x in raw)
    if key not in cache:
        cache[key] = _D_one_sign(params, sign, _D_REL_TOL)
    return cache[key]


def _evaluate(params: ParamSet, ctx: GroupContext, N_bar: float, cache: dict) -> BoundReport:
    """Theorem-exact certificate with memoized majorant integrals.

    Produces the same floats as bounds.assemble at the same tolerance.
    """
    validate(params, ctx)
    q_plus, q_minus = compute_q(params, ctx)
    D_plus = _cached_D(params, +1, cache)
    D_minus = _cached_D(params, -1, cache)
    factor = spectral_factor(ctx.eta, include_phi_constant=True)
    return BoundReport(
        q_plus=q_plus,
        q_minus=q_minus,
        D_plus=D_plus,
        D_minus=D_minus,
        N_bar=N_bar,
        spectral_factor=factor,
        A=-q_plus - D_plus * factor * N_bar,
        B=-q_minus + D_minus * factor * N_bar,
        mode="theorem-exact",
    )


def _objective_value(report: BoundReport, objective: str) -> float:
    if objective == "width":
        return report.width
    return max(abs(report.A), abs(report.B))


def search(
    cfg: SearchConfig, ctx: GroupContext, delta: float, N_bar: float
) -> tuple[ParamSet, BoundReport]:
    """Minimize the configured objective starting from the seed parameters.

    The seed is rebuilt at the requested delta and validated against ctx; an
    invalid seed raises ConstraintViolation.  Candidates that violate a
    constraint after projection, or whose quadrature fails to converge, are
    skipped.  The returned objective never exceeds the seed's.
    """
    seed_values = _coordinate_values(cfg.seed_params)
    sigma_max = sigma_ceiling(ctx.eta)
    try:
        current = ParamSet(
            trapezoid=TrapezoidParams(
                delta=delta,
                alpha_plus=seed_values["alpha_plus"],
                alpha_minus=seed_values["alpha_minus"],
                beta_plus=seed_values["beta_plus"],
                beta_minus=seed_values["beta_minus"],
            ),
            sigma_plus=seed_values["sigma_plus"],
            sigma_minus=seed_values["sigma_minus"],
        )
        validate(current, ctx)
    except ConstraintViolation as exc:
        raise ConstraintViolation(f"seed parameters are invalid: {exc}") from exc

    cache: dict = {}
    report = _evaluate(current, ctx, N_bar, cache)
    score = _objective_value(report, cfg.objective)

    steps = {name: math.log(INITIAL_STEP) for name in _COORDINATES}
    step_floor = math.log1p(STEP_FLOOR)
    for _ in range(cfg.max_iters - 1):
        if all(step < step_floor for step in steps.values()):
            break
        for name in _COORDINATES:
            best = None
            for direction in (1.0, -1.0):
                values = _coordinate_values(current)
                values[name] *= math.exp(direction * steps[name])
                try:
                    candidate = _make_params(delta, values, sigma_max)
                    candidate_report = _evaluate(candidate, ctx, N_bar, cache)
                except (ConstraintViolation, NonConvergenceError):
                    continue
                candidate_score = _objective_value(candidate_report, cfg.objective)
                if candidate_score < score and (best is None or candidate_score < best[0]):
                    best = (candidate_score, candidate, candidate_report)
            if best is None:
                steps[name] *= cfg.step_shrink
            else:
                score, current, report = best
    return current, report
