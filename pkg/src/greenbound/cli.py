"""Command-line front end: configuration, subcommands, and certificate records.

Subcommands:

* count            grid-certified displacement-count bound over a region
* bounds           assemble the two-sided certificate A <= . <= B
* reproduce-paper  replay the published pipeline numbers, one line per item
* cusp-extend      transport a certificate into a cusp neighbourhood
* optimize         coordinate-descent tuning of the free parameters
* selftest         run the analytic property spot checks

Configuration comes from built-in defaults, overridden by an optional JSON
config file (--config), overridden by command-line flags.  Every command
accepts --json FILE to write a machine-readable record: the fields of the
produced certificate plus the config echo and the tool version.  Exit
codes: 0 success, 1 configuration or constraint error, 2 numerical
failure, 3 reproduction mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

from greenbound import __version__
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
    group_preset,
    reference_params,
)
from greenbound.cusps import CuspBoundReport, CuspGeometry, admissible_eps, extend_bounds
from greenbound.errors import ConstraintViolation, NonConvergenceError
from greenbound.geom import Rectangle
from greenbound.lattice import CountCertificate, count_bound, truncated_fundamental_domain
from greenbound.optimize import SearchConfig, search
from greenbound.transforms import TrapezoidParams
from greenbound.verify import CheckResult, property_battery, reproduction_battery

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_MISMATCH = 3

# The physical constants of the pipeline, in one place.  Values mirror the
# module-level definitions they annotate.
CONSTANTS = {
    "volume_modular": (VOLUME_MODULAR, "stack volume pi/6 of the modular quotient"),
    "eta_selberg": (ETA_SELBERG, "classical spectral gap 3/16"),
    "eta_kim_sarnak": (ETA_KIM_SARNAK, "strongest supported spectral gap 975/4096"),
    "min_c_modular": (MIN_C_MODULAR, "smallest positive lower-left entry over the group"),
    "count_cap": (COUNT_CAP_STANDARD, "certified displacement count on the truncated domain"),
    "rounded_q_plus": (ROUNDED_Q_PLUS, "rounded cap on the plus volume term"),
    "rounded_q_minus": (ROUNDED_Q_MINUS, "rounded floor on the minus volume term"),
    "rounded_D_plus": (ROUNDED_D_PLUS, "rounded cap on the plus majorant integral"),
    "rounded_D_minus": (ROUNDED_D_MINUS, "rounded cap on the minus majorant integral"),
    "headline_A": (HEADLINE_A, "published lower certificate"),
    "headline_B": (HEADLINE_B, "published upper certificate"),
}

_MODE_ALIASES = {
    "exact": "theorem-exact",
    "theorem-exact": "theorem-exact",
    "paper": "paper-arithmetic",
    "paper-arithmetic": "paper-arithmetic",
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings; every referenced invariant is re-validated."""

    group: GroupContext
    params: ParamSet
    region: Rectangle
    U: float
    grid: tuple[int, int]
    mode: str
    n_bar: float
    cusp: CuspGeometry | None

    def __post_init__(self) -> None:
        if self.mode not in ("theorem-exact", "paper-arithmetic"):
            raise ConstraintViolation(f"mode must be exact or paper, got {self.mode!r}")
        if not (self.U >= 1.0):
            raise ConstraintViolation(f"U must be at least 1, got {self.U}")
        if not (self.grid[0] >= 1 and self.grid[1] >= 1):
            raise ConstraintViolation(f"grid must be at least 1x1, got {self.grid}")
        if not (self.n_bar >= 2.0):
            raise ConstraintViolation(f"n_bar must be at least 2, got {self.n_bar}")


def default_config() -> RunConfig:
    return RunConfig(
        group=group_preset("sl2z"),
        params=reference_params(),
        region=truncated_fundamental_domain(),
        U=17.0,
        grid=(100, 100),
        mode="theorem-exact",
        n_bar=COUNT_CAP_STANDARD,
        cusp=None,
    )


def _parse_mode(text: str) -> str:
    try:
        return _MODE_ALIASES[text]
    except KeyError:
        raise ConstraintViolation(
            f"mode must be one of {sorted(set(_MODE_ALIASES))}, got {text!r}"
        ) from None


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConstraintViolation(f"grid must look like 100x100, got {text!r}")
    try:
        nx, ny = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConstraintViolation(f"grid must hold integers, got {text!r}") from None
    return nx, ny


def _parse_floats(text: str, count: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise ConstraintViolation(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConstraintViolation(f"{what} must hold numbers, got {text!r}") from None


def _group_from_entry(entry) -> GroupContext:
    if isinstance(entry, str):
        return group_preset(entry)
    if isinstance(entry, dict):
        return GroupContext(
            name=str(entry.get("name", "custom")),
            vol=float(entry["vol"]),
            eta=float(entry["eta"]),
            contains_minus_one=bool(entry.get("contains_minus_one", True)),
            min_c=float(entry.get("min_c", 1.0)),
        )
    raise ConstraintViolation(f"group must be a preset name or a mapping, got {entry!r}")


def _params_from_entry(entry: dict, base: ParamSet) -> ParamSet:
    if not isinstance(entry, dict):
        raise ConstraintViolation(f"params must be a mapping, got {entry!r}")
    t = base.trapezoid
    return ParamSet(
        trapezoid=TrapezoidParams(
            delta=float(entry.get("delta", t.delta)),
            alpha_plus=float(entry.get("alpha_plus", t.alpha_plus)),
            alpha_minus=float(entry.get("alpha_minus", t.alpha_minus)),
            beta_plus=float(entry.get("beta_plus", t.beta_plus)),
            beta_minus=float(entry.get("beta_minus", t.beta_minus)),
        ),
        sigma_plus=float(entry.get("sigma_plus", base.sigma_plus)),
        sigma_minus=float(entry.get("sigma_minus", base.sigma_minus)),
    )


def _region_from_entry(entry) -> Rectangle:
    if isinstance(entry, dict):
        return Rectangle(
            x_min=float(entry["x_min"]),
            x_max=float(entry["x_max"]),
            y_min=float(entry["y_min"]),
            y_max=float(entry["y_max"]),
        )
    if isinstance(entry, (list, tuple)) and len(entry) == 4:
        return Rectangle(*(float(v) for v in entry))
    raise ConstraintViolation(f"region must be a mapping or 4 numbers, got {entry!r}")


def _cusp_from_entry(entry: dict, group: GroupContext, params: ParamSet) -> CuspGeometry:
    if not isinstance(entry, dict):
        raise ConstraintViolation(f"cusp must be a mapping, got {entry!r}")
    return CuspGeometry(
        eps=float(entry["eps"]),
        eps_prime=float(entry["eps_prime"]),
        delta=float(entry.get("delta", params.delta)),
        min_c=float(entry.get("min_c", group.min_c)),
        count_pm1=int(entry.get("count_pm1", 2 if group.contains_minus_one else 1)),
    )


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConstraintViolation(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConstraintViolation(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConstraintViolation(f"config file {path!r} must hold a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config file entries, then command-line flags."""
    base = default_config()
    group, params, region = base.group, base.params, base.region
    U, grid, mode, n_bar = base.U, base.grid, base.mode, base.n_bar
    cusp_entry: dict | None = None
    grid_given = False

    if getattr(args, "config", None):
        data = load_config(args.config)
        unknown = set(data) - {"group", "params", "region", "U", "grid", "mode", "n_bar", "cusp"}
        if unknown:
            raise ConstraintViolation(f"unknown config fields: {sorted(unknown)}")
        if "group" in data:
            group = _group_from_entry(data["group"])
        if "params" in data:
            params = _params_from_entry(data["params"], params)
        if "region" in data:
            region = _region_from_entry(data["region"])
        if "U" in data:
            U = float(data["U"])
        if "grid" in data:
            entry = data["grid"]
            grid = _parse_grid(entry) if isinstance(entry, str) else (int(entry[0]), int(entry[1]))
            grid_given = True
        if "mode" in data:
            mode = _parse_mode(str(data["mode"]))
        if "n_bar" in data:
            n_bar = float(data["n_bar"])
        if "cusp" in data:
            cusp_entry = data["cusp"]

    preset = getattr(args, "preset", None)
    if preset == "sl2z":
        group = group_preset("sl2z")
    elif preset == "y0":
        region = truncated_fundamental_domain()
    elif preset is not None:
        raise ConstraintViolation(f"unknown preset {preset!r}; available: sl2z, y0")

    if getattr(args, "point", None):
        x, y = _parse_floats(args.point, 2, "point")
        region = Rectangle(x_min=x, x_max=x, y_min=y, y_max=y)
        if not grid_given and getattr(args, "grid", None) is None:
            grid = (1, 1)
    if getattr(args, "region", None):
        values = _parse_floats(args.region, 4, "region")
        region = Rectangle(*values)
    if getattr(args, "U", None) is not None:
        U = args.U
    if getattr(args, "grid", None):
        grid = _parse_grid(args.grid)
    if getattr(args, "mode", None):
        mode = _parse_mode(args.mode)
    if getattr(args, "n_bar", None) is not None:
        n_bar = args.n_bar

    for name in ("eps", "eps_prime"):
        if getattr(args, name, None) is not None:
            cusp_entry = dict(cusp_entry or {})
            cusp_entry[name] = getattr(args, name)
    if getattr(args, "count_pm1", None) is not None:
        cusp_entry = dict(cusp_entry or {})
        cusp_entry["count_pm1"] = args.count_pm1

    cusp = _cusp_from_entry(cusp_entry, group, params) if cusp_entry is not None else None
    return RunConfig(
        group=group,
        params=params,
        region=region,
        U=U,
        grid=grid,
        mode=mode,
        n_bar=n_bar,
        cusp=cusp,
    )


def config_echo(config: RunConfig) -> dict:
    echo = {
        "group": dataclasses.asdict(config.group),
        "params": {
            "delta": config.params.delta,
            "alpha_plus": config.params.alpha_plus,
            "alpha_minus": config.params.alpha_minus,
            "beta_plus": config.params.beta_plus,
            "beta_minus": config.params.beta_minus,
            "sigma_plus": config.params.sigma_plus,
            "sigma_minus": config.params.sigma_minus,
        },
        "region": dataclasses.asdict(config.region),
        "U": config.U,
        "grid": list(config.grid),
        "mode": config.mode,
        "n_bar": config.n_bar,
        "cusp": dataclasses.asdict(config.cusp) if config.cusp is not None else None,
    }
    return echo


def _base_record(command: str, config: RunConfig | None) -> dict:
    record = {"tool": "greenbound", "version": __version__, "command": command}
    if config is not None:
        record["config"] = config_echo(config)
    return record


def count_record(cert: CountCertificate, config: RunConfig) -> dict:
    record = _base_record("count", config)
    record.update(
        region=dataclasses.asdict(cert.region),
        U=cert.U,
        grid=list(cert.grid),
        per_cell_counts=[list(row) for row in cert.per_cell_counts],
        bound=cert.bound,
    )
    return record


def parse_count_certificate(record: dict) -> CountCertificate:
    return CountCertificate(
        region=Rectangle(**record["region"]),
        U=record["U"],
        grid=tuple(record["grid"]),
        per_cell_counts=tuple(tuple(row) for row in record["per_cell_counts"]),
        bound=record["bound"],
    )


_REPORT_FIELDS = (
    "q_plus",
    "q_minus",
    "D_plus",
    "D_minus",
    "N_bar",
    "spectral_factor",
    "A",
    "B",
    "mode",
)


def bounds_record(report: BoundReport, config: RunConfig) -> dict:
    record = _base_record("bounds", config)
    record.update({name: getattr(report, name) for name in _REPORT_FIELDS})
    record["width"] = report.width
    return record


def parse_bound_report(record: dict) -> BoundReport:
    return BoundReport(**{name: record[name] for name in _REPORT_FIELDS})


_CUSP_FIELDS = ("case", "base_A", "base_B", "offset_terms", "A_tilde", "B_tilde")


def cusp_record(report: CuspBoundReport, config: RunConfig) -> dict:
    record = _base_record("cusp-extend", config)
    record.update({name: getattr(report, name) for name in _CUSP_FIELDS})
    return record


def parse_cusp_report(record: dict) -> CuspBoundReport:
    return CuspBoundReport(**{name: record[name] for name in _CUSP_FIELDS})


def _emit(record: dict, path: str | None) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(record, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _print_checks(results: list[CheckResult]) -> None:
    for result in results:
        print(f"{'PASS' if result.passed else 'FAIL'}  {result.name}: {result.detail}")


def cmd_count(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    start = time.perf_counter()
    cert = count_bound(config.region, config.U, config.grid)
    elapsed = time.perf_counter() - start
    r = cert.region
    print(f"region:  [{r.x_min:g}, {r.x_max:g}] x [{r.y_min:g}, {r.y_max:g}]")
    print(f"U:       {cert.U:g}")
    print(f"grid:    {cert.grid[0]}x{cert.grid[1]}")
    print(f"bound:   {cert.bound}")
    print(f"elapsed: {elapsed:.2f}s")
    _emit(count_record(cert, config), args.json)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    report = assemble(config.params, config.group, config.n_bar, mode=config.mode)
    print(f"mode:            {report.mode}")
    print(f"q_plus:          {report.q_plus:.6f}")
    print(f"q_minus:         {report.q_minus:.6f}")
    print(f"D_plus:          {report.D_plus:.8f}")
    print(f"D_minus:         {report.D_minus:.8f}")
    print(f"N_bar:           {report.N_bar:g}")
    print(f"spectral factor: {report.spectral_factor:.8f}")
    print(f"A:               {report.A:.4f}")
    print(f"B:               {report.B:.4f}")
    print(f"width:           {report.width:.4f}")
    _emit(bounds_record(report, config), args.json)
    return EXIT_OK


def cmd_reproduce_paper(args: argparse.Namespace) -> int:
    grid = _parse_grid(args.grid) if args.grid else (100, 100)
    print("constants:")
    for name, (value, description) in CONSTANTS.items():
        print(f"  {name} = {value:.12g}  ({description})")
    results = reproduction_battery(grid=grid)
    _print_checks(results)
    passed = all(r.passed for r in results)
    print(f"reproduction: {sum(r.passed for r in results)}/{len(results)} items passed")
    record = _base_record("reproduce-paper", None)
    record["checks"] = [dataclasses.asdict(r) for r in results]
    record["passed"] = passed
    _emit(record, args.json)
    return EXIT_OK if passed else EXIT_MISMATCH


def cmd_cusp_extend(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if config.cusp is None:
        raise ConstraintViolation(
            "cusp-extend needs cusp radii; pass --eps/--eps-prime or a config cusp block"
        )
    geom = config.cusp
    eps_prime_max, eps_max = admissible_eps(geom.delta, geom.min_c)
    base = assemble(config.params, config.group, config.n_bar, mode=config.mode)
    report = extend_bounds(base, geom, args.case)
    print(f"case:          {report.case}")
    print(f"eps:           {geom.eps:g} (max {eps_max:.7f})")
    print(f"eps_prime:     {geom.eps_prime:g} (max {eps_prime_max:.7f})")
    print(f"base A, B:     {report.base_A:.4f}, {report.base_B:.4f}")
    print(f"offsets:       {report.offset_terms}")
    if report.A_tilde is not None:
        print(f"A~, B~:        {report.A_tilde:.4f}, {report.B_tilde:.4f}")
    _emit(cusp_record(report, config), args.json)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    cfg = SearchConfig(
        objective=args.objective,
        max_iters=args.max_iters,
        step_shrink=args.step_shrink,
        seed_params=config.params,
    )
    best, report = search(cfg, config.group, config.params.delta, config.n_bar)
    print(f"objective: {cfg.objective}")
    print(f"A:         {report.A:.4f}")
    print(f"B:         {report.B:.4f}")
    print(f"width:     {report.width:.4f}")
    for name in ("alpha_plus", "beta_plus", "sigma_plus", "alpha_minus", "beta_minus", "sigma_minus"):
        print(f"{name:<12} {getattr(best, name):.8g}")
    record = _base_record("optimize", config)
    record.update({name: getattr(report, name) for name in _REPORT_FIELDS})
    record["width"] = report.width
    record["objective"] = cfg.objective
    record["best_params"] = {
        "delta": best.delta,
        "alpha_plus": best.alpha_plus,
        "alpha_minus": best.alpha_minus,
        "beta_plus": best.beta_plus,
        "beta_minus": best.beta_minus,
        "sigma_plus": best.sigma_plus,
        "sigma_minus": best.sigma_minus,
    }
    _emit(record, args.json)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    results = property_battery()
    _print_checks(results)
    passed = all(r.passed for r in results)
    print(f"selftest: {sum(r.passed for r in results)}/{len(results)} checks passed")
    record = _base_record("selftest", None)
    record["checks"] = [dataclasses.asdict(r) for r in results]
    record["passed"] = passed
    _emit(record, args.json)
    return EXIT_OK if passed else EXIT_NUMERICAL


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; remap to the config error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="greenbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"greenbound {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--json", help="write the machine record to this file")
        p.add_argument("--preset", help="apply a preset: sl2z (group) or y0 (region)")

    p_count = sub.add_parser("count", help="certified displacement-count bound on a region")
    add_common(p_count)
    p_count.add_argument("--point", help="degenerate region at a single point, as X,Y")
    p_count.add_argument("--region", help="rectangle as x_min,x_max,y_min,y_max")
    p_count.add_argument("--U", type=float, help="displacement threshold")
    p_count.add_argument("--grid", help="subdivision as NXxNY, e.g. 100x100")
    p_count.set_defaults(handler=cmd_count)

    p_bounds = sub.add_parser("bounds", help="assemble the certificate A <= . <= B")
    add_common(p_bounds)
    p_bounds.add_argument("--mode", help="arithmetic mode: exact or paper")
    p_bounds.add_argument("--n-bar", dest="n_bar", type=float, help="uniform count bound")
    p_bounds.set_defaults(handler=cmd_bounds)

    p_rep = sub.add_parser("reproduce-paper", help="replay the published pipeline numbers")
    p_rep.add_argument("--json", help="write the machine record to this file")
    p_rep.add_argument("--grid", help="grid for the count item (default 100x100)")
    p_rep.set_defaults(handler=cmd_reproduce_paper)

    p_cusp = sub.add_parser("cusp-extend", help="transport a certificate to a cusp neighbourhood")
    add_common(p_cusp)
    p_cusp.add_argument("--case", required=True, choices=("a", "a_prime", "b", "c"))
    p_cusp.add_argument("--eps", type=float, help="inner neighbourhood radius")
    p_cusp.add_argument("--eps-prime", dest="eps_prime", type=float, help="outer radius")
    p_cusp.add_argument("--count-pm1", dest="count_pm1", type=int, help="1 or 2")
    p_cusp.add_argument("--mode", help="arithmetic mode: exact or paper")
    p_cusp.add_argument("--n-bar", dest="n_bar", type=float, help="uniform count bound")
    p_cusp.set_defaults(handler=cmd_cusp_extend)

    p_opt = sub.add_parser("optimize", help="tune the free parameters")
    add_common(p_opt)
    p_opt.add_argument("--objective", default="width", choices=("width", "max-abs"))
    p_opt.add_argument("--max-iters", dest="max_iters", type=int, default=25)
    p_opt.add_argument("--step-shrink", dest="step_shrink", type=float, default=0.7)
    p_opt.add_argument("--n-bar", dest="n_bar", type=float, help="uniform count bound")
    p_opt.set_defaults(handler=cmd_optimize)

    p_self = sub.add_parser("selftest", help="run the analytic property spot checks")
    p_self.add_argument("--json", help="write the machine record to this file")
    p_self.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConstraintViolation as exc:
        print(f"greenbound: constraint error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"greenbound: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"greenbound: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"greenbound: i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
