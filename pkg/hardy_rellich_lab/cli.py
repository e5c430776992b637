# -*- coding: utf-8 -*-

"""
Command line front end, ``hrlab <subcommand> [options]``.

Exit codes:

- ``0``: success, the pair / condition holds.
- ``1``: not a pair / the condition fails.
- ``2``: inconclusive pair check.
- ``64``: usage error (bad arguments, unparsable weight, unknown catalog
  entry, missing parameter, invalid grid).
- ``70``: the computation failed.

JSON output is deterministic: sorted keys and floats rounded to 12
significant digits.
"""

import typing as T
import io
import sys
import csv
import enum
import math
import logging
import argparse
import dataclasses
from pathlib import Path

from .exc import (
    HardyRellichLabError,
    UsageError,
    WeightSyntaxError,
    CatalogError,
    UnboundParameterError,
    GridError,
)
from .grid import (
    DEFAULT_M,
    MIN_USER_NODES,
    GridSpec,
    RadialDomain,
    MeshKindEnum,
    build_grid,
)
from .weightlang import ParamBinding, parse, catalog, catalog_names
from .besselpair import VerdictEnum, is_bessel_pair
from .conditions import ConditionEnum, check_pointwise, check_integral
from .spectrum import (
    FORM_TOL,
    ProblemEnum,
    compute_best_constant,
    mellin_constant,
    mode_scan,
    symmetry_verdict,
    radial_equivalence_check,
)
from .utils import T_DATA, dumps_json, normalize_floats

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_SOFTWARE = 70

USAGE_ERRORS = (
    UsageError,
    WeightSyntaxError,
    CatalogError,
    UnboundParameterError,
    GridError,
)

DEFAULT_W = {
    ProblemEnum.hardy: "1/r^2",
    ProblemEnum.hardy_rellich: "1/r^2",
    ProblemEnum.rellich: "1/r^4",
}

CSV_COLUMNS = ["problem", "N", "k", "value", "converged", "sensitivity"]


class FormatEnum(str, enum.Enum):
    json = "json"
    csv = "csv"
    text = "text"


class CommandEnum(str, enum.Enum):
    check_pair = "check-pair"
    check_cond = "check-cond"
    best_constant = "best-constant"
    mode_scan = "mode-scan"
    symmetry = "symmetry"
    catalog = "catalog"
    oracle = "oracle"
    equiv_check = "equiv-check"


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _radius(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"radius must be positive, got {text}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    group = common.add_argument_group("output and numerics")
    group.add_argument(
        "--format",
        choices=[f.value for f in FormatEnum],
        default=FormatEnum.json.value,
        help="report format (default: json)",
    )
    group.add_argument("--output", default=None, help="write the report to a file")
    group.add_argument("--R", type=_radius, default=math.inf, help="radius (default: inf)")
    group.add_argument("--b", type=float, default=None, help="CKN exponent b")
    group.add_argument("--c", type=float, default=None, help="free parameter c")
    group.add_argument("--grid-M", type=int, default=DEFAULT_M, help="number of nodes (default: 2048)")
    group.add_argument("--grid-r-min", type=float, default=None, help="inner truncation (default: 1e-4 min(R, 1))")
    group.add_argument("--grid-r-max", type=float, default=None, help="outer truncation (default: R, or 1e4)")
    group.add_argument(
        "--grid-kind",
        choices=[k.value for k in MeshKindEnum],
        default=MeshKindEnum.log.value,
        help="mesh kind (default: log)",
    )
    group.add_argument("--tol", type=float, default=FORM_TOL, help="form tolerance (default: 1e-6)")
    group.add_argument("--workers", type=int, default=1, help="threads for mode scans")
    group.add_argument("--verbose", action="store_true", help="debug logging to stderr")

    parser = _ArgumentParser(
        prog="hrlab",
        description="Numerical lab for weighted Hardy, Hardy-Rellich and Rellich inequalities.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    problems = [p.value.replace("_", "-") for p in ProblemEnum]

    p = sub.add_parser(CommandEnum.check_pair.value, parents=[common], help="certify a Bessel pair")
    p.add_argument("--dim", type=int, default=None, help="dimension d of the pair")
    p.add_argument("--V", default="1")
    p.add_argument("--W", default=None)
    p.add_argument(
        "--N", type=int, default=None,
        help="value of N in the weights (default: --dim). A second order pair in d = N + 2 needs it, e.g. --dim 7 --N 5",
    )
    p.add_argument("--name", default=None, help="certify a catalog entry in its own dimension instead of --V/--W")

    p = sub.add_parser(CommandEnum.check_cond.value, parents=[common], help="check a weight condition")
    p.add_argument("--id", required=True, choices=[c.value for c in ConditionEnum])
    p.add_argument("--V", default="1")
    p.add_argument("--W", default=None)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser(CommandEnum.best_constant.value, parents=[common], help="best constant of one mode")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--V", default="1")
    p.add_argument("--W", default=None, help="default: 1/r^2, or 1/r^4 for rellich")
    p.add_argument("--k", type=int, default=0)

    for name, help_text in (
        (CommandEnum.mode_scan.value, "best constants or margins over modes"),
        (CommandEnum.symmetry.value, "radial optimality verdict"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--problem", required=True, choices=problems)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--V", default="1")
        p.add_argument("--W", default=None, help="default: 1/r^2, or 1/r^4 for rellich")
        p.add_argument("--kmax", type=int, default=8)

    p = sub.add_parser(CommandEnum.catalog.value, parents=[common], help="named weight pairs")
    p.add_argument("--list", action="store_true")
    p.add_argument("--name", default=None)
    p.add_argument("--N", type=int, default=None)

    p = sub.add_parser(CommandEnum.oracle.value, parents=[common], help="closed form constant of power weights")
    p.add_argument("--problem", required=True, choices=problems)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, default=0)

    p = sub.add_parser(CommandEnum.equiv_check.value, parents=[common], help="radial Hardy-Rellich vs Hardy in N + 2")
    p.add_argument("--W", required=True)
    p.add_argument("--N", type=int, required=True)
    return parser


@dataclasses.dataclass
class RunConfig:
    """
    Validated arguments of one invocation.
    """

    command: CommandEnum
    fmt: FormatEnum = FormatEnum.json
    output: T.Optional[Path] = None
    V: str = "1"
    W: T.Optional[str] = None
    N: T.Optional[int] = None
    dim: T.Optional[int] = None
    R: float = math.inf
    b: T.Optional[float] = None
    c: T.Optional[float] = None
    grid: GridSpec = dataclasses.field(default_factory=GridSpec)
    problem: T.Optional[ProblemEnum] = None
    k: int = 0
    kmax: int = 8
    condition: T.Optional[ConditionEnum] = None
    catalog_name: T.Optional[str] = None
    catalog_list: bool = False
    tol: float = FORM_TOL
    workers: int = 1
    verbose: bool = False

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        get = lambda name, default=None: getattr(ns, name, default)
        problem = get("problem")
        condition = get("id")
        config = cls(
            command=CommandEnum(ns.command),
            fmt=FormatEnum(ns.format),
            output=Path(ns.output) if ns.output else None,
            V=get("V", "1"),
            W=get("W"),
            N=get("N"),
            dim=get("dim"),
            R=ns.R,
            b=ns.b,
            c=ns.c,
            grid=GridSpec(
                M=ns.grid_M,
                r_min=ns.grid_r_min,
                r_max=ns.grid_r_max,
                kind=ns.grid_kind,
            ),
            problem=None if problem is None else ProblemEnum.parse(problem),
            k=get("k", 0),
            kmax=get("kmax", 8),
            condition=None if condition is None else ConditionEnum.parse(condition),
            catalog_name=get("name"),
            catalog_list=bool(get("list", False)),
            tol=ns.tol,
            workers=ns.workers,
            verbose=ns.verbose,
        )
        config.validate()
        return config

    def validate(self):
        for name in ("N", "dim"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise UsageError(f"--{name} must be >= 1, got {value}")
        if self.grid.M < MIN_USER_NODES:
            raise UsageError(f"--grid-M must be >= {MIN_USER_NODES}, got {self.grid.M}")
        if self.k < 0 or self.kmax < 0:
            raise UsageError("mode indices must be >= 0")
        if not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if self.workers < 1:
            raise UsageError(f"--workers must be >= 1, got {self.workers}")
        if self.condition is ConditionEnum.con and self.W is None:
            raise UsageError("check-cond --id con needs --W")
        if self.command is CommandEnum.check_pair:
            if self.catalog_name is not None:
                if self.N is None:
                    raise UsageError("check-pair --name needs --N")
            elif self.dim is None or self.W is None:
                raise UsageError("check-pair needs --dim and --W, or --name and --N")
        if self.command is CommandEnum.catalog:
            if not self.catalog_list and self.catalog_name is None:
                raise UsageError("catalog needs --list or --name")
            if self.catalog_name is not None and self.N is None:
                raise UsageError("catalog --name needs --N")
        # parse early so that syntax errors are usage errors
        parse(self.V)
        if self.W is not None:
            parse(self.W)

    @property
    def binding(self) -> ParamBinding:
        return ParamBinding(N=self.N, R=self.R, b=self.b, c=self.c)

    @property
    def W_or_default(self) -> str:
        if self.W is not None:
            return self.W
        return DEFAULT_W[self.problem]


@dataclasses.dataclass
class Outcome:
    """
    What a subcommand produced: the JSON payload, a text rendering, CSV rows
    and the exit code.
    """

    payload: T_DATA
    text: str
    rows: T.Optional[T.List[T_DATA]] = None
    exit_code: int = EXIT_OK


def _grid(config: RunConfig, dim: int):
    return build_grid(RadialDomain(dim=dim, radius=config.R), config.grid)


def _run_check_pair(config: RunConfig) -> Outcome:
    if config.catalog_name is not None:
        entry = catalog(config.catalog_name, config.binding)
        V, W, dim, domain = entry
        binding = entry.binding
    else:
        V, W, dim = config.V, config.W, config.dim
        domain = RadialDomain(dim=dim, radius=config.R)
        binding = config.binding.with_defaults(N=dim)
    grid = build_grid(domain, config.grid)
    cert = is_bessel_pair(V, W, dim, domain, grid, tol=config.tol, binding=binding)
    exit_code = {
        VerdictEnum.pair.value: EXIT_OK,
        VerdictEnum.not_pair.value: EXIT_FAIL,
    }.get(cert.verdict, EXIT_INCONCLUSIVE)
    text = (
        f"{cert.verdict.upper()}: form margin {cert.form_margin:.6g}, "
        f"min phi {cert.min_phi}"
    )
    return Outcome(payload=cert.to_dict(), text=text, exit_code=exit_code)


def _run_check_cond(config: RunConfig) -> Outcome:
    if config.condition.is_pointwise:
        domain = RadialDomain(dim=config.N, radius=config.R)
        report = check_pointwise(
            config.condition, config.V, config.W, config.N, domain,
            tol=config.tol, binding=config.binding,
        )
    else:
        report = check_integral(
            config.condition, config.V, config.W or "0", config.N,
            _grid(config, config.N), tol=config.tol, binding=config.binding,
        )
    verdict = "HOLDS" if report.holds else "FAILS"
    text = (
        f"{report.id} {verdict}: worst value {report.worst_value:.6g} "
        f"at r={report.worst_point:.6g}"
    )
    return Outcome(
        payload=report.to_dict(),
        text=text,
        exit_code=EXIT_OK if report.holds else EXIT_FAIL,
    )


def _run_best_constant(config: RunConfig) -> Outcome:
    res = compute_best_constant(
        config.problem, config.V, config.W_or_default, config.N, config.k,
        _grid(config, config.N), binding=config.binding,
    )
    payload = dict(
        problem=config.problem.value,
        N=config.N,
        k=config.k,
        V=str(parse(config.V)),
        W=str(parse(config.W_or_default)),
        **res.to_dict(),
    )
    row = {key: payload[key] for key in CSV_COLUMNS}
    text = f"{config.problem.value} N={config.N} k={config.k}: {res.value:.10g}"
    return Outcome(payload=payload, text=text, rows=[row])


def _scan(config: RunConfig):
    return mode_scan(
        config.problem, config.V, config.W_or_default, config.N,
        _grid(config, config.N), k_range=range(0, config.kmax + 1),
        binding=config.binding, workers=config.workers,
    )


def _run_mode_scan(config: RunConfig) -> Outcome:
    report = _scan(config)
    lines = [f"{m.k}\t{m.value}" for m in report.modes]
    lines.append(f"global {report.global_value} at k={report.argmin_k}")
    return Outcome(payload=report.to_dict(), text="\n".join(lines), rows=report.to_rows())


def _run_symmetry(config: RunConfig) -> Outcome:
    report = _scan(config)
    verdict = symmetry_verdict(report)
    payload = dict(report=report.to_dict(), **verdict.to_dict())
    return Outcome(payload=payload, text=verdict.to_text(), rows=report.to_rows())


def _run_catalog(config: RunConfig) -> Outcome:
    if config.catalog_list:
        names = catalog_names()
        return Outcome(
            payload=dict(names=names),
            text="\n".join(names),
            rows=[dict(name=name) for name in names],
        )
    entry = catalog(config.catalog_name, config.binding)
    data = entry.to_dict()
    text = f"{entry.name}: V = {entry.V}, W = {entry.W}, dim = {entry.dim}"
    return Outcome(payload=data, text=text)


def _run_oracle(config: RunConfig) -> Outcome:
    value = mellin_constant(config.problem, config.N, config.k)
    payload = dict(problem=config.problem.value, N=config.N, k=config.k, value=value)
    return Outcome(payload=payload, text=f"{value:.12g}")


def _run_equiv_check(config: RunConfig) -> Outcome:
    check = radial_equivalence_check(
        config.W, config.N, config.R, config.grid, binding=config.binding
    )
    payload = dict(W=str(parse(config.W)), N=config.N, R=config.R, **check.to_dict())
    text = (
        f"radial Hardy-Rellich {check.c_hr_radial:.10g}, "
        f"Hardy in N+2 {check.c_hardy_np2:.10g}, rel diff {check.rel_diff:.3g}"
    )
    return Outcome(payload=payload, text=text)


_HANDLERS: T.Dict[CommandEnum, T.Callable[[RunConfig], Outcome]] = {
    CommandEnum.check_pair: _run_check_pair,
    CommandEnum.check_cond: _run_check_cond,
    CommandEnum.best_constant: _run_best_constant,
    CommandEnum.mode_scan: _run_mode_scan,
    CommandEnum.symmetry: _run_symmetry,
    CommandEnum.catalog: _run_catalog,
    CommandEnum.oracle: _run_oracle,
    CommandEnum.equiv_check: _run_equiv_check,
}


def _to_csv(outcome: Outcome) -> str:
    rows = outcome.rows
    if rows is None:
        flat = normalize_floats(outcome.payload)
        rows = [
            dict(key=k, value=v)
            for k, v in sorted(flat.items())
            if not isinstance(v, (dict, list))
        ]
    rows = normalize_floats(rows)
    buffer = io.StringIO()
    fieldnames = list(rows[0]) if rows else CSV_COLUMNS
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def render(config: RunConfig, outcome: Outcome) -> str:
    if config.fmt is FormatEnum.json:
        document = dict(
            schema=SCHEMA_VERSION,
            command=config.command.value,
            result=outcome.payload,
        )
        return dumps_json(document) + "\n"
    if config.fmt is FormatEnum.csv:
        return _to_csv(outcome)
    return outcome.text + "\n"


def run(argv: T.Optional[T.List[str]] = None) -> int:
    """
    Run one command line invocation and return its exit code.
    """
    try:
        ns = _build_parser().parse_args(argv)
        if ns.verbose:
            logging.basicConfig(
                level=logging.DEBUG,
                format="%(asctime)s %(name)s %(levelname)s %(message)s",
            )
        config = RunConfig.from_namespace(ns)
        outcome = _HANDLERS[config.command](config)
        content = render(config, outcome)
        if config.output is None:
            sys.stdout.write(content)
        else:
            config.output.write_text(content, encoding="utf-8")
        return outcome.exit_code
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except USAGE_ERRORS as e:
        sys.stderr.write(f"hrlab: usage error: {e}\n")
        return EXIT_USAGE
    except (HardyRellichLabError, ArithmeticError, ValueError) as e:
        logger.debug("computation failed", exc_info=True)
        sys.stderr.write(f"hrlab: computation failed: {e}\n")
        return EXIT_SOFTWARE


def main(argv: T.Optional[T.List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
