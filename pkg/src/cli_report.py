# src/cli_report.py

"""
Command-line front end.

    measured-walls estimate-c --n 2 --seed 7
    measured-walls verify-crofton --n 3 --samples 100000 --out crofton.json
    measured-walls cnk --n 3 --format csv --out cnk.csv
    measured-walls sweep-unbounded --t-max 300

Exit codes: 0 when every suite passes, 1 on usage or I/O errors, 2 when a
statistical check fails.
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from cnk_kernel import default_sweep, run_cnk_suites, unboundedness_sweep
from crofton_verifier import DEFAULT_T_VALUES, estimate_c, run_crofton_suites, summarize_rows
from data_validation import IntegrationMethod, Report, ReportRow, RunConfig
from hyperbolic.lorentz_core import DegenerateInputError, DomainError, UsageError
from report_export import ReportExporter, ReportExportError
from utils.config import Config, setup_logging

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_STATISTICAL_FAILURE = 2

LOW_SAMPLE_WARNING = 10_000
ADDITIVITY_INSTANCES = 20


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_t_grid(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid t-grid {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, required=True, help="dimension of hyperbolic space (2..8)")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
    common.add_argument(
        "--method",
        choices=[method.value for method in IntegrationMethod],
        default=IntegrationMethod.AUTO.value,
    )
    common.add_argument("--samples", type=int, default=200_000, help="Monte Carlo samples per estimate")
    common.add_argument("--nodes", type=int, default=256, help="quadrature nodes per sphere axis")
    common.add_argument("--t-grid", type=parse_t_grid, default=None, help="comma-separated t values")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", default=None, help="report path (stdout when omitted)")
    common.add_argument("--eps-side", type=float, default=1e-12)
    common.add_argument("--r-margin", type=float, default=0.25)
    common.add_argument("--points", type=int, default=8)
    common.add_argument("--configurations", type=int, default=200)
    common.add_argument("--hilbert-instances", type=int, default=20)
    common.add_argument("--triples", type=int, default=1000, help="left-invariance triples")
    common.add_argument("--pairs", type=int, default=10)
    common.add_argument("--transforms", type=int, default=10)
    common.add_argument("--t-max", type=float, default=300.0)
    common.add_argument("--workers", type=int, default=Config.WORKERS)
    common.add_argument(
        "--record-timing",
        action="store_true",
        help="embed the wall-clock duration in the report",
    )
    common.add_argument("--log-level", default=None)

    parser = CliArgumentParser(
        prog="measured-walls",
        description="Measured walls of hyperbolic space: Crofton constant and CNK checks.",
    )
    parser.add_argument("--version", action="version", version=Config.VERSION)
    subparsers = parser.add_subparsers(dest="subcommand", required=True, parser_class=CliArgumentParser)
    subparsers.add_parser("estimate-c", parents=[common], help="fit c(n) in F = c(n) d")
    subparsers.add_parser(
        "verify-crofton", parents=[common], help="invariance, additivity and linearity suites"
    )
    subparsers.add_parser("cnk", parents=[common], help="conditionally negative kernel suites")
    subparsers.add_parser("sweep-unbounded", parents=[common], help="K(a_t, e) against |t|")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        n=args.n,
        seed=args.seed,
        method=args.method,
        samples=args.samples,
        nodes=args.nodes,
        t_grid=args.t_grid,
        out=args.out,
        format=args.format,
        eps_side=args.eps_side,
        r_margin=args.r_margin,
        points=args.points,
        configurations=args.configurations,
        hilbert_instances=args.hilbert_instances,
        triples=args.triples,
        pairs=args.pairs,
        transforms=args.transforms,
        t_max=args.t_max,
        workers=args.workers,
        record_timing=args.record_timing,
    )


def _suite_dicts(summaries) -> List[Dict[str, Any]]:
    return [summary.model_dump(mode="json") for summary in summaries]


def finish(
    cfg: RunConfig,
    rows: Sequence[ReportRow],
    summary: Dict[str, Any],
    started: float,
) -> int:
    """Writes the report and maps the outcome to an exit code."""
    duration = time.perf_counter() - started
    logger.info("%s finished in %.2f s: %s.", cfg.subcommand, duration,
                "PASS" if summary["pass"] else "FAIL")
    report = Report(
        version=Config.VERSION,
        config=cfg.echo(),
        rows=list(rows),
        summary=summary,
        runtime={"duration_seconds": duration} if cfg.record_timing else None,
    )
    ReportExporter().write(report.to_payload(), cfg.out, cfg.format)
    return EXIT_PASS if summary["pass"] else EXIT_STATISTICAL_FAILURE


def _warn_low_samples(cfg: RunConfig) -> List[str]:
    if cfg.method == IntegrationMethod.QUADRATURE or (
        cfg.method == IntegrationMethod.AUTO and cfg.n <= 3
    ):
        return []
    if cfg.samples >= LOW_SAMPLE_WARNING:
        return []
    message = f"only {cfg.samples} Monte Carlo samples per estimate; error bars are wide"
    logger.warning(message)
    return [message]


def cmd_estimate_c(cfg: RunConfig) -> int:
    started = time.perf_counter()
    report = estimate_c(cfg.n, cfg.t_grid or DEFAULT_T_VALUES, cfg.integration_config())
    summary = {
        "pass": report.passed,
        "c_hat": report.c_hat,
        "c_stderr": report.c_stderr,
        "halfwidth": report.halfwidth,
        "intercept": report.intercept,
        "intercept_stderr": report.intercept_stderr,
        "reduced_chi2": report.reduced_chi2,
        "suites": _suite_dicts(report.summaries),
        "warnings": _warn_low_samples(cfg),
    }
    return finish(cfg, report.rows, summary, started)


def cmd_verify_crofton(cfg: RunConfig) -> int:
    started = time.perf_counter()
    report = run_crofton_suites(
        cfg.n,
        cfg.integration_config(),
        t_values=cfg.t_grid,
        pairs=cfg.pairs,
        transforms=cfg.transforms,
        additivity_instances=ADDITIVITY_INSTANCES,
    )
    summary = {
        "pass": report.passed,
        "c_hat": report.c_hat,
        "halfwidth": report.halfwidth,
        "suites": _suite_dicts(report.summaries),
        "warnings": _warn_low_samples(cfg),
    }
    return finish(cfg, report.rows, summary, started)


def cmd_cnk(cfg: RunConfig) -> int:
    started = time.perf_counter()
    sweep = default_sweep(cfg.t_max)
    integration = cfg.integration_config()
    crofton = estimate_c(cfg.n, cfg.t_grid or DEFAULT_T_VALUES, integration)
    report = run_cnk_suites(
        cfg.n,
        integration,
        points=cfg.points,
        configurations=cfg.configurations,
        hilbert_instances=cfg.hilbert_instances,
        triples=cfg.triples,
        transforms=cfg.transforms,
        t_grid=sweep,
        crofton=crofton,
    )
    summary = {
        "pass": report.passed,
        "c_hat": report.c_hat,
        "defect_max": report.defect_max,
        "suites": _suite_dicts(report.summaries),
        "warnings": _warn_low_samples(cfg),
    }
    return finish(cfg, report.rows, summary, started)


def cmd_sweep_unbounded(cfg: RunConfig) -> int:
    started = time.perf_counter()
    t_values = cfg.t_grid or default_sweep(cfg.t_max)
    rows = unboundedness_sweep(t_values, cfg.n)
    suite = summarize_rows(rows, "unboundedness", pass_fraction=1.0)
    summary = {"pass": suite.passed, "suites": _suite_dicts([suite])}
    return finish(cfg, rows, summary, started)


COMMANDS = {
    "estimate-c": cmd_estimate_c,
    "verify-crofton": cmd_verify_crofton,
    "cnk": cmd_cnk,
    "sweep-unbounded": cmd_sweep_unbounded,
}


def _usage_failure(message: str) -> int:
    # stderr already gets the printed line
    if Config.LOG_FILE:
        logger.error(message)
    print(f"measured-walls: error: {message}", file=sys.stderr)
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(level=args.log_level)
    try:
        cfg = run_config_from_args(args)
    except ValidationError as exc:
        return _usage_failure(f"invalid arguments: {exc}")

    logger.info("Running %s (n=%d, seed=%d, method=%s).", cfg.subcommand, cfg.n, cfg.seed,
                cfg.method.value)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (UsageError, DegenerateInputError, DomainError, ValidationError) as exc:
        return _usage_failure(str(exc))
    except ReportExportError as exc:
        return _usage_failure(str(exc))
    except Exception as exc:
        logger.exception("Unexpected error while running %s.", cfg.subcommand)
        return _usage_failure(f"internal error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
