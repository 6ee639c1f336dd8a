"""Run supervisor: executes scenarios, writes artefacts and produces concise summaries."""
from __future__ import annotations

import time
from pathlib import Path
from typing import Any, Callable, Dict, List

from core.config import ScenarioConfig, save_config
from core.orchestrator import ProgressCallback, compare_controllers, run_scenario
from core.storage import write_report, write_run_log
from scenarios.metrics import error_metrics
from scenarios.runlog import RunLog

EXIT_OK = 0
EXIT_DIVERGED = 1
EXIT_CONFIG = 2

_EXIT_CODES = {"completed": EXIT_OK, "diverged": EXIT_DIVERGED, "config_error": EXIT_CONFIG}


def exit_code(summary: Dict[str, Any]) -> int:
    return _EXIT_CODES.get(summary.get("status", ""), EXIT_DIVERGED)


class RunSupervisor:
    """Wraps single runs and comparisons; every outcome becomes a summary dict."""

    def __init__(self, cfg: ScenarioConfig) -> None:
        self._cfg = cfg
        self._errors: List[str] = []
        self._outputs: Dict[str, str] = {}
        self._elapsed = 0.0

    # -- public API ----------------------------------------------------------

    def run(
        self,
        out_path: Path | str | None = None,
        controller: str | None = None,
        on_progress: ProgressCallback | None = None,
    ) -> Dict[str, Any]:
        cfg = self._cfg
        name = controller or cfg.controller
        log_path = Path(out_path) if out_path else Path(cfg.output.directory) / f"{name}.csv"

        started = time.perf_counter()
        log = run_scenario(cfg, controller=name, on_progress=on_progress)
        self._elapsed = time.perf_counter() - started

        self._write_log(name, log, log_path)
        metrics: Dict[str, Dict[str, float]] = {}
        if not log.diverged:
            report = error_metrics(log, cfg.metrics_window)
            metrics = {"max": dict(report.max_abs_error), "rmse": dict(report.rmse)}
            report_path = write_report(
                log_path.with_suffix(".txt"), {name: report}, title=f"{name} tracking error report"
            )
            self._outputs["report"] = str(report_path)
        else:
            self._errors.append(log.diagnostic)

        summary = self.summarize(status=log.status, controllers=[name])
        summary["rows"] = len(log)
        summary["metrics"] = metrics
        return summary

    def compare(
        self,
        out_dir: Path | str | None = None,
        parallel: bool = True,
        on_done: Callable[[str, RunLog], None] | None = None,
    ) -> Dict[str, Any]:
        cfg = self._cfg
        out_dir = Path(out_dir) if out_dir else Path(cfg.output.directory)

        started = time.perf_counter()
        comparison = compare_controllers(cfg, parallel=parallel, on_done=on_done)
        self._elapsed = time.perf_counter() - started

        for name, log in comparison.logs.items():
            self._write_log(name, log, out_dir / f"{name}.csv")
        report_path = write_report(
            out_dir / "comparison.txt",
            comparison.reports,
            comparison.verdicts,
            comparison.diverged,
            title="Controller comparison",
        )
        self._outputs["report"] = str(report_path)
        self._errors.extend(f"{name}: {text}" for name, text in comparison.diverged.items())

        status = "diverged" if comparison.diverged else "completed"
        summary = self.summarize(status=status, controllers=list(comparison.logs))
        summary["comparison"] = comparison
        summary["ordering_holds"] = comparison.ordering_holds
        return summary

    def summarize(self, status: str, controllers: List[str]) -> Dict[str, Any]:
        """Compact summary dict for the CLI."""
        return {
            "status": status,
            "controllers": controllers,
            "elapsed": round(self._elapsed, 3),
            "outputs": dict(self._outputs),
            "summary": self._build_summary_text(status, controllers),
            "errors": list(self._errors),
        }

    # -- internal helpers ----------------------------------------------------

    def _write_log(self, name: str, log: RunLog, log_path: Path) -> None:
        self._outputs[f"{name}_log"] = str(write_run_log(log, log_path))
        self._outputs["config"] = str(save_config(self._cfg, log_path.parent / "resolved.cfg"))

    def _build_summary_text(self, status: str, controllers: List[str]) -> str:
        names = ", ".join(controllers)
        if status == "completed":
            return f"{names} finished {self._cfg.duration:g} s of simulated flight in {self._elapsed:.1f} s."
        detail = self._errors[0] if self._errors else "unknown failure"
        return f"{names} diverged: {detail}"
