"""Command-line entry point for logderiv"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src import __description__, __version__
from src.arrangement import Arrangement, Line, builtin_arrangement, load_arrangement
from src.classify import (
    ClassTag,
    classify,
    invariant_lines,
    pointwise_fixed_lines,
)
from src.config import ConfigLoader, LogderivConfig
from src.derivations import VectorField, build_matrix, dump_matrix, kernel_basis
from src.errors import (
    DegenerateLine,
    DuplicateLine,
    EmptyArrangement,
    LogDerivError,
    ParseError,
    UnknownName,
)
from src.report import (
    AnalysisReport,
    ClaimModel,
    ClassifyReport,
    ComparisonReport,
    ReproductionReport,
    build_analysis_report,
    build_classify_report,
    build_comparison_report,
    parse_rational_str,
)
from src.reproduce import run_reproduction
from src.utils.logging_setup import log_duration, setup_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_DEGENERATE = 3

DEGENERATE_ERRORS = (DegenerateLine, DuplicateLine, EmptyArrangement, UnknownName)


class UsageError(Exception):
    """Wrong number of arrangement inputs for a command"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML configuration file")
    common.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override the configured log level",
    )

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("paths", nargs="*", help="Arrangement files")
    inputs.add_argument(
        "--builtin",
        action="append",
        default=[],
        metavar="NAME",
        help="Built-in arrangement: pappus, nonpappus, ziegler, ziegler2",
    )

    parser = argparse.ArgumentParser(prog="logderiv", description=__description__)
    parser.add_argument("--version", action="version", version=f"logderiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", parents=[common, inputs], help="Filtration, d_f and bounds"
    )
    analyze.add_argument("--dmax", type=int, default=None, help="Highest filtration degree")
    analyze.add_argument("--json", action="store_true", help="Emit the JSON report")
    analyze.add_argument("--bases", action="store_true", help="Include kernel bases")
    analyze.add_argument(
        "--dump-matrix", default=None, metavar="PATH", help="Write constraint matrices"
    )

    compare = sub.add_parser(
        "compare", parents=[common, inputs], help="Weak and strong combinatorics"
    )
    compare.add_argument("--df", action="store_true", help="Also compute both d_f")
    compare.add_argument("--json", action="store_true", help="Emit the JSON report")

    classify_cmd = sub.add_parser(
        "classify", parents=[common, inputs], help="Classify a vector field"
    )
    classify_cmd.add_argument("--field", required=True, help='Vector field as "P;Q"')
    classify_cmd.add_argument("--json", action="store_true", help="Emit the JSON report")

    reproduce = sub.add_parser(
        "reproduce", parents=[common], help="Check the published claims"
    )
    reproduce.add_argument("--json", action="store_true", help="Emit the JSON report")
    return parser


def load_settings(config_path: Optional[str]) -> LogderivConfig:
    if config_path:
        return ConfigLoader(Path(config_path)).load_config()
    return ConfigLoader().load_or_default()


def resolve_inputs(args: argparse.Namespace) -> List[Arrangement]:
    arrangements = [builtin_arrangement(name) for name in args.builtin]
    arrangements.extend(load_arrangement(path) for path in args.paths)
    return arrangements


def _expect(arrangements: List[Arrangement], count: int, command: str) -> None:
    if len(arrangements) != count:
        raise UsageError(f"{command} needs {count} arrangement(s), got {len(arrangements)}")


def _label(arrangement: Arrangement) -> str:
    return f"{arrangement.name or 'arrangement'} ({len(arrangement)} lines)"


def render_analysis(report: AnalysisReport) -> str:
    comb = report.combinatorics
    out = [f"# logderiv {report.version}"]
    out.append(f"arrangement: {report.arrangement.name or 'arrangement'}")
    arrangement = report.arrangement.to_arrangement()
    for k, line in enumerate(arrangement):
        out.append(f"  L{k + 1}: {line}")
    out.append(
        f"combinatorics: n={comb.n} m={comb.m} p={comb.p} "
        f"nu_inf={comb.nu_inf} nu_f={comb.nu_f} nu={comb.nu}"
    )
    out.append(
        "  weak signature: "
        + " ".join(f"{k}:{v}" for k, v in comb.weak_signature.items())
    )
    out.append(f"  parallel pairs: {comb.parallel_pairs}")
    out.append(
        "  projective signature: "
        + " ".join(f"{k}:{v}" for k, v in comb.projective_signature.items())
    )
    out.append("filtration:")
    for degree in report.filtration:
        classes = ", ".join(c.tag for c in degree.classes)
        out.append(f"  d={degree.d} dim={degree.dim}" + (f" [{classes}]" if classes else ""))
        for model in degree.basis or []:
            out.append(f"    {model.text}")
    df = report.df
    if df.d_f is not None:
        out.append(f"d_f: {df.d_f}")
        if df.witness is not None:
            out.append(f"  witness: {df.witness.text}")
    else:
        out.append(f"d_f: > {df.not_found_below}")
    for entry in df.trail:
        note = entry.bound or entry.method or ""
        out.append(f"  d={entry.d} dim={entry.dim} {entry.decision} {note}".rstrip())
    out.append("bounds:")
    for statement in report.bounds.statements:
        status = "PASS" if statement.holds else "FAIL"
        where = f" d={statement.d}" if statement.d is not None else ""
        out.append(f"  {status} {statement.claim}{where} {statement.detail}".rstrip())
    return "\n".join(out) + "\n"


def render_comparison(report: ComparisonReport) -> str:
    out = [f"# logderiv {report.version}"]
    out.append(f"first: {report.first.name or 'arrangement'}")
    out.append(f"second: {report.second.name or 'arrangement'}")
    out.append(f"weak combinatorics equal: {'yes' if report.weak_equal else 'no'}")
    out.append(f"intersection posets isomorphic: {'yes' if report.poset_isomorphic else 'no'}")
    if report.witness is not None:
        mapping = " ".join(f"L{a + 1}->L{b + 1}" for a, b in report.witness.line_map)
        out.append(f"  witness: {mapping}")
        out.append(f"  witness verified: {'yes' if report.witness_verified else 'no'}")
    if report.df_first is not None and report.df_second is not None:

        def show(model) -> str:
            return str(model.d_f) if model.d_f is not None else f">{model.not_found_below}"

        out.append(f"d_f: {show(report.df_first)} vs {show(report.df_second)}")
    return "\n".join(out) + "\n"


def render_classification(report: ClassifyReport) -> str:
    out = [f"# logderiv {report.version}"]
    out.append(f"field: {report.field.text}")
    out.append(f"degree: {report.degree}")
    cls = report.classification
    detail = ""
    if cls.center is not None:
        detail = f" ({cls.center[0]}, {cls.center[1]})"
    elif cls.direction is not None:
        detail = f" ({cls.direction[0]}, {cls.direction[1]})"
    out.append(f"class: {cls.tag}{detail}")
    if report.invariant_lines is not None:
        completeness = "complete" if report.complete else "possibly incomplete"
        out.append(f"invariant lines ({completeness}):")
        for triple in report.invariant_lines:
            line = Line.normalized(*(parse_rational_str(v) for v in triple))
            out.append(f"  {line}")
    if report.arrangement is not None:
        name = report.arrangement.name or "arrangement"
        out.append(f"logarithmic for {name}: {'yes' if report.is_logarithmic else 'no'}")
        fixed = " ".join(f"L{i + 1}" for i in report.pointwise_fixed_lines or [])
        out.append(f"  pointwise fixed lines: {fixed or 'none'}")
    return "\n".join(out) + "\n"


def cmd_analyze(args: argparse.Namespace, config: LogderivConfig) -> int:
    arrangements = resolve_inputs(args)
    _expect(arrangements, 1, "analyze")
    arrangement = arrangements[0]
    d_max = args.dmax if args.dmax is not None else config.computation.default_dmax
    if d_max < 0:
        raise UsageError("--dmax must be non-negative")
    logging.info(f"Analyzing {_label(arrangement)} up to degree {d_max}")

    with log_duration(f"Analysis of {_label(arrangement)}", logging.INFO):
        report = build_analysis_report(
            arrangement,
            d_max=d_max,
            df_limit=config.computation.df_search_limit,
            include_bases=args.bases,
            grid_cap=config.computation.grid_cap,
            fallback_above_cap=config.computation.fallback_above_cap,
        )
    if args.dump_matrix:
        path = Path(args.dump_matrix)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for d in range(d_max + 1):
                matrix = build_matrix(arrangement, d)
                f.write(dump_matrix(matrix, kernel_basis(matrix)))
        logging.info(f"Constraint matrices written to {path}")

    sys.stdout.write(
        report.model_dump_json(indent=2) + "\n" if args.json else render_analysis(report)
    )
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: LogderivConfig) -> int:
    arrangements = resolve_inputs(args)
    _expect(arrangements, 2, "compare")
    with log_duration("Comparison", logging.INFO):
        report = build_comparison_report(
            arrangements[0],
            arrangements[1],
            df_limit=config.computation.df_search_limit if args.df else None,
            grid_cap=config.computation.grid_cap,
            fallback_above_cap=config.computation.fallback_above_cap,
        )
    sys.stdout.write(
        report.model_dump_json(indent=2) + "\n" if args.json else render_comparison(report)
    )
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, config: LogderivConfig) -> int:
    chi = VectorField.parse(args.field)
    arrangements = resolve_inputs(args)
    if len(arrangements) > 1:
        raise UsageError(f"classify takes at most one arrangement, got {len(arrangements)}")
    field_class = classify(chi)
    lines = invariant_lines(chi) if field_class.tag == ClassTag.FINITE else None
    arrangement = arrangements[0] if arrangements else None
    fixed = pointwise_fixed_lines(chi, arrangement) if arrangement is not None else None
    report = build_classify_report(chi, field_class, lines, arrangement, fixed)
    sys.stdout.write(
        report.model_dump_json(indent=2) + "\n"
        if args.json
        else render_classification(report)
    )
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, config: LogderivConfig) -> int:
    result = run_reproduction(config)
    if args.json:
        report = ReproductionReport(
            passed=result.passed,
            claims=[ClaimModel(**claim.__dict__) for claim in result.claims],
        )
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(f"# logderiv {__version__}\n" + result.render())
    return EXIT_OK if result.passed else EXIT_FAILURE


COMMANDS = {
    "analyze": cmd_analyze,
    "compare": cmd_compare,
    "classify": cmd_classify,
    "reproduce": cmd_reproduce,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_settings(args.config)
    except (FileNotFoundError, ValueError) as e:
        setup_logging("INFO", None)
        logging.error(f"Failed to load configuration: {e}")
        return EXIT_PARSE_ERROR

    level = args.log_level or config.logging.level
    setup_logging(level, config.logging.file)

    try:
        return COMMANDS[args.command](args, config)
    except ParseError as e:
        logging.error(f"Parse error: {e}")
        return EXIT_PARSE_ERROR
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        logging.error(f"Cannot read input: {e}")
        return EXIT_PARSE_ERROR
    except UsageError as e:
        logging.error(str(e))
        return EXIT_PARSE_ERROR
    except DEGENERATE_ERRORS as e:
        logging.error(f"Degenerate input: {e}")
        return EXIT_DEGENERATE
    except LogDerivError as e:
        logging.error(f"Computation failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
