"""Command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.application.dto.report_dto import AnalysisReport
from app.application.services import CatalogService, FunctorService
from app.application.services.analysis_service import AnalysisService
from app.application.services.verification_service import SCOPES, VerificationService
from app.core.config import apply_overrides, settings
from app.core.exceptions import EngineError, ParseError
from app.core.logging_config import setup_logging
from app.domain.entities.category import FiniteCategory
from app.domain.entities.semigroup import FiniteSemigroup
from app.infrastructure.formats import (
    dump_category,
    dump_cayley,
    dump_generators,
    eggbox_to_dot,
    render_eggbox_text,
    semigroup_to_json,
)
from app.infrastructure.observability.metrics import StageTimer

logger = logging.getLogger(__name__)

SEMIGROUP_FORMATS = ("cayley", "generators", "json")


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with every verb."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap-size", type=int, help="Largest accepted semigroup order")
    common.add_argument("--cap-cones", type=int, help="Cone search budget")
    common.add_argument("--cap-n", type=int, help="Largest n for catalog families")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    common.add_argument("--log-json", action="store_true", help="Emit JSON log lines")
    common.add_argument("--log-file", default=None, help="Also log to this file")
    common.add_argument("--seed", type=int, help="Reserved; every computation is deterministic")
    common.add_argument("--no-timing", action="store_true", help="Omit timing from reports")

    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Connected categories and cone semigroups of finite regular semigroups",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    analyze = verbs.add_parser("analyze", parents=[common], help="Run the analysis pipeline")
    analyze.add_argument("input", help="catalog:NAME, a semigroup or category file, or an analysis script")
    analyze.add_argument(
        "--check",
        action="append",
        default=[],
        choices=["supported", "self-supported", "bounded-above", "normal"],
        help="Extra check (repeatable)",
    )
    analyze.add_argument("--dot", default=None, help="Write DOT diagrams into this directory")
    analyze.add_argument("--format", choices=["json", "text"], default="json")

    eggbox = verbs.add_parser("eggbox", parents=[common], help="Draw the egg-box diagram")
    eggbox.add_argument("input")
    eggbox.add_argument("--format", choices=["text", "dot"], default="text")

    catalog = verbs.add_parser("catalog", parents=[common], help="List or build catalog entries")
    catalog.add_argument("action", choices=["list", "build"])
    catalog.add_argument("name", nargs="?", help="Entry name or family (T, ST, I, P, SP, X)")
    catalog.add_argument("n", nargs="?", type=int, help="Degree for a family name")
    catalog.add_argument("--format", choices=SEMIGROUP_FORMATS, default="cayley")

    suite = verbs.add_parser("verify-suite", parents=[common], help="Run every instance-level check")
    suite.add_argument("scope", nargs="?", default="all", choices=list(SCOPES) + ["all"])
    suite.add_argument("--output", default=None, help="Also write the JSON report to this file")

    convert = verbs.add_parser("convert", parents=[common], help="Rewrite an input in another format")
    convert.add_argument("input")
    convert.add_argument("--to", required=True, choices=list(SEMIGROUP_FORMATS) + ["category"])

    return parser


def _apply_flags(args: argparse.Namespace) -> None:
    apply_overrides(
        MAX_SEMIGROUP_SIZE=args.cap_size,
        MAX_CONE_CANDIDATES=args.cap_cones,
        MAX_CATALOG_SEMIGROUP_N=args.cap_n,
        MAX_CATALOG_CATEGORY_N=args.cap_n,
        LOG_LEVEL=args.log_level,
        LOG_JSON=args.log_json or None,
        LOG_FILE=args.log_file,
        SEED=args.seed,
    )


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def render_report_text(report: AnalysisReport) -> str:
    """Human-readable digest of an analysis report."""
    lines = [f"{report.input.kind} {report.input.name or report.input.source}"]
    if report.flags:
        held = [name for name, value in report.flags.items() if value]
        lines.append(f"  flags: {', '.join(held) or 'none'}")
    if report.greens:
        g = report.greens
        lines.append(f"  order {g.order}: {g.num_l} L, {g.num_r} R, {g.num_h} H, {g.num_d} D classes")
    if report.category:
        c = report.category
        lines.append(f"  category {c.name}: {len(c.objects)} objects, {c.num_morphisms} morphisms")
    if report.cones:
        lines.append(f"  cones: {report.cones.order}, connection order {report.cones.connection_order}")
    for stage in report.stages:
        suffix = f" ({stage.reason})" if stage.reason else ""
        lines.append(f"  [{stage.status}] {stage.stage}{suffix}")
    for rt in report.roundtrips:
        suffix = f" ({rt.reason})" if rt.reason else ""
        lines.append(f"  roundtrip {rt.name}: {rt.status}{suffix}")
    for checks in report.checks:
        for failure in checks.failures():
            lines.append(f"  FAIL {checks.subject}: {failure.name} {failure.witness or ''}".rstrip())
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)


def _semigroup_text(S: FiniteSemigroup, fmt: str) -> str:
    if fmt == "generators":
        return dump_generators(S)
    if fmt == "json":
        return semigroup_to_json(S)
    return dump_cayley(S)


def _cmd_analyze(args: argparse.Namespace) -> int:
    result = AnalysisService.analyze(args.input, checks=args.check)
    report = result.report
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        for stem, dot in result.diagrams.items():
            (out / f"{stem}.dot").write_text(dot, encoding="utf-8")
    if args.format == "text":
        _emit(render_report_text(report))
    else:
        _emit(report.to_json(include_timing=not args.no_timing))
    return 0 if report.passed else 1


def _cmd_eggbox(args: argparse.Namespace) -> int:
    loaded = AnalysisService.load(args.input)
    if not isinstance(loaded.subject, FiniteSemigroup):
        raise ParseError(0, "eggbox needs a semigroup input")
    S = loaded.subject
    _emit(eggbox_to_dot(S) if args.format == "dot" else render_eggbox_text(S))
    return 0


def _cmd_catalog(args: argparse.Namespace) -> int:
    if args.action == "list":
        for entry in CatalogService.entries():
            held = [name for name, value in sorted(entry.expected_flags.items()) if value]
            _emit(f"{entry.name:<8} {entry.kind:<10} {entry.description}; {', '.join(held)}")
        return 0
    if not args.name:
        raise ParseError(0, "catalog build needs a name")
    name = f"{args.name}{args.n}" if args.n is not None else args.name
    built = CatalogService.build(name)
    if isinstance(built, FiniteSemigroup):
        _emit(_semigroup_text(built, args.format))
    else:
        _emit(dump_category(built.category))
    return 0


def _cmd_verify_suite(args: argparse.Namespace) -> int:
    report = VerificationService.run(args.scope, timer=StageTimer())
    text = report.to_json(include_timing=not args.no_timing)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    _emit(text)
    return VerificationService.exit_code(report)


def _cmd_convert(args: argparse.Namespace) -> int:
    subject = AnalysisService.load(args.input).subject
    if args.to == "category":
        if isinstance(subject, FiniteSemigroup):
            subject = FunctorService.functor_C(subject)
        category = subject if isinstance(subject, FiniteCategory) else subject.category
        _emit(dump_category(category))
        return 0
    if not isinstance(subject, FiniteSemigroup):
        raise ParseError(0, f"cannot convert a category to {args.to}")
    _emit(_semigroup_text(subject, args.to))
    return 0


COMMANDS = {
    "analyze": _cmd_analyze,
    "eggbox": _cmd_eggbox,
    "catalog": _cmd_catalog,
    "verify-suite": _cmd_verify_suite,
    "convert": _cmd_convert,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one verb and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_flags(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    setup_logging(level=settings.LOG_LEVEL, json_format=settings.LOG_JSON, log_file=settings.LOG_FILE)

    try:
        return COMMANDS[args.verb](args)
    except EngineError as exc:
        logger.error(str(exc), extra={"stage": args.verb})
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except Exception:
        logger.exception(f"Unexpected failure in {args.verb}", extra={"stage": args.verb})
        return 1


if __name__ == "__main__":
    sys.exit(main())
