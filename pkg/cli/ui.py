"""Rich UI components for the simulator CLI."""
from __future__ import annotations

from typing import Any, Callable, Dict, Iterable, Mapping

from rich.console import Console
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table
from rich.theme import Theme

from core.validation import CheckResult
from scenarios.metrics import CHANNELS, ErrorReport, OrderingVerdict

# ---------------------------------------------------------------------------
# Console singleton
# ---------------------------------------------------------------------------

_THEME = Theme(
    {
        "info": "cyan",
        "success": "bold green",
        "warning": "bold yellow",
        "error": "bold red",
        "title": "bold magenta",
    }
)

console = Console(theme=_THEME)


def print_banner(command: str, detail: str = "") -> None:
    content = f"[title]Aerial manipulator simulator[/title] · {command}"
    if detail:
        content += f"\n[dim]{detail}[/dim]"
    console.print(Panel(content, border_style="cyan", expand=False))


def print_status(summary: Mapping[str, Any]) -> None:
    """One themed status line plus the written artefacts."""
    style = "success" if summary.get("status") == "completed" else "error"
    console.print(f"[{style}]{summary.get('status', '?')}[/{style}] {summary.get('summary', '')}")
    for key, path in summary.get("outputs", {}).items():
        console.print(f"  [dim]{key}:[/dim] {path}")


def print_config_error(message: str) -> None:
    console.print(Panel(message, title="Configuration error", border_style="red", expand=False))


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def print_error_table(
    reports: Mapping[str, ErrorReport],
    diverged: Iterable[str] = (),
    title: str = "Tracking errors",
) -> None:
    window = next(iter(reports.values())).window if reports else None
    if window:
        title += f" over [{window[0]:g} s, {window[1]:g} s]"
    table = Table(title=title, border_style="cyan")
    table.add_column("Controller", style="bold")
    for channel in CHANNELS:
        table.add_column(f"{channel} max", justify="right")
        table.add_column(f"{channel} rmse", justify="right", style="dim")
    for name, report in reports.items():
        cells = []
        for channel in CHANNELS:
            cells += [f"{report.max_abs_error[channel]:.3e}", f"{report.rmse[channel]:.3e}"]
        table.add_row(name, *cells)
    for name in diverged:
        table.add_row(name, "[error]diverged[/error]", *[""] * (2 * len(CHANNELS) - 1))
    console.print(table)


def print_verdicts(verdicts: Iterable[OrderingVerdict]) -> None:
    table = Table(title="Ordering verdicts (max error)", border_style="cyan")
    table.add_column("Channel", style="bold")
    table.add_column("Expected")
    table.add_column("Values", justify="right")
    table.add_column("Holds", justify="center")
    for v in verdicts:
        mark = "[success]✓[/success]" if v.holds else "[warning]✗[/warning]"
        table.add_row(v.channel, f"{v.better} < {v.worse}", f"{v.better_value:.3e} / {v.worse_value:.3e}", mark)
    console.print(table)


def print_validation(results: Iterable[CheckResult]) -> None:
    table = Table(title="Validation", border_style="cyan")
    table.add_column("Suite", style="bold")
    table.add_column("Check")
    table.add_column("Measured", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Result", justify="center")
    for r in results:
        mark = "[success]pass[/success]" if r.passed else "[error]FAIL[/error]"
        table.add_row(r.suite, r.name, f"{r.measured:.3e}", f"{r.tolerance:.1e}", mark)
    console.print(table)


# ---------------------------------------------------------------------------
# RunProgressUI
# ---------------------------------------------------------------------------

class RunProgressUI:
    """Progress bars for one or more simulation runs."""

    def __init__(self) -> None:
        self._progress = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
        )
        self._tasks: Dict[str, Any] = {}

    def __enter__(self) -> "RunProgressUI":
        self._progress.start()
        return self

    def __exit__(self, *exc: object) -> None:
        self._progress.stop()

    def add_run(self, name: str, total: int) -> None:
        self._tasks[name] = self._progress.add_task(name, total=total)

    def complete_run(self, name: str, ok: bool = True) -> None:
        task_id = self._tasks.get(name)
        if task_id is not None:
            task = self._progress.tasks[task_id]
            mark = "✓" if ok else "✗"
            self._progress.update(task_id, completed=task.total, description=f"{mark} {name}")

    def make_step_callback(self, name: str) -> Callable[[int, int], None]:
        """Return a ``(step, total) -> None`` callback for run progress."""

        def _cb(step: int, total: int) -> None:
            task_id = self._tasks.get(name)
            if task_id is None:
                self.add_run(name, total)
                task_id = self._tasks[name]
            self._progress.update(task_id, completed=step)

        return _cb
