"""Command-line harness: run, compare and validate."""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from cli.ui import (
    RunProgressUI,
    console,
    print_banner,
    print_config_error,
    print_error_table,
    print_status,
    print_validation,
    print_verdicts,
)
from core.config import CONTROLLERS, ConfigError, load_config
from core.supervisor import EXIT_CONFIG, EXIT_DIVERGED, EXIT_OK, RunSupervisor, exit_code
from core.validation import SUITES, run_suite
from scenarios.metrics import ErrorReport

_CONFIG_HELP = "Scenario file (key = value); ./scenario.cfg when present, else defaults"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run.py",
        description="Quadrotor with 4-DOF arm: FOFTSMC, FTSMC and PID under arm-motion disturbance",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Simulate the configured controller")
    run.add_argument("config", nargs="?", help=_CONFIG_HELP)
    run.add_argument("--out", help="CSV log path")
    run.add_argument("--controller", choices=CONTROLLERS, help="Override the configured controller")

    compare = sub.add_parser("compare", help="Run all three controllers on the same scenario")
    compare.add_argument("config", nargs="?", help=_CONFIG_HELP)
    compare.add_argument("--out", help="Output directory")
    compare.add_argument("--serial", action="store_true", help="Run controllers one after another")

    validate = sub.add_parser("validate", help="Run the numerical oracle suites")
    validate.add_argument("--suite", choices=["all", *SUITES], default="all")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    name = args.controller or cfg.controller
    print_banner("run", f"{name}, {cfg.duration:g} s at dt = {cfg.dt:g} s, {cfg.plant.model} plant")
    supervisor = RunSupervisor(cfg)
    with RunProgressUI() as ui:
        ui.add_run(name, cfg.steps)
        summary = supervisor.run(args.out, controller=name, on_progress=ui.make_step_callback(name))
        ui.complete_run(name, ok=summary["status"] == "completed")
    if summary["metrics"]:
        report = ErrorReport(
            window=cfg.metrics_window,
            max_abs_error=summary["metrics"]["max"],
            rmse=summary["metrics"]["rmse"],
            samples=summary["rows"],
        )
        print_error_table({name: report})
    print_status(summary)
    return exit_code(summary)


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    print_banner("compare", f"PID, FTSMC, FOFTSMC, {cfg.duration:g} s at dt = {cfg.dt:g} s")
    supervisor = RunSupervisor(cfg)
    with console.status("[info]Simulating controllers ...[/info]", spinner="dots"):
        summary = supervisor.compare(
            args.out,
            parallel=not args.serial,
            on_done=lambda name, log: console.print(f"  [dim]{name}: {log.status}, {len(log)} rows[/dim]"),
        )
    comparison = summary["comparison"]
    print_error_table(comparison.reports, comparison.diverged)
    if comparison.verdicts:
        print_verdicts(comparison.verdicts)
    print_status(summary)
    return exit_code(summary)


def _cmd_validate(args: argparse.Namespace) -> int:
    print_banner("validate", f"suite: {args.suite}")
    with console.status("[info]Running oracle checks ...[/info]", spinner="dots"):
        results = run_suite(args.suite)
    print_validation(results)
    failed = [r for r in results if not r.passed]
    if failed:
        console.print(f"[error]{len(failed)} of {len(results)} checks failed[/error]")
        return EXIT_DIVERGED
    console.print(f"[success]All {len(results)} checks passed[/success]")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "validate": _cmd_validate}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print_config_error(str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
