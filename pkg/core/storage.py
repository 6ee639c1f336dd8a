"""Persistence of run artefacts: CSV logs, run manifests and text error reports.

write_run_log / load_run_log   -- CSV time series, 17 significant digits
write_manifest / load_manifest -- JSON sidecar with status and diagnostic
write_report                   -- plain-text error tables
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping

import numpy as np

from scenarios.metrics import CHANNELS, ErrorReport, OrderingVerdict, PUBLISHED_MAX_ERRORS
from scenarios.runlog import RunLog, STATUS_COMPLETED

FLOAT_FORMAT = "%.17g"


def atomic_write_text(path: Path | str, content: str) -> Path:
    """Write *content* to *path* through a temporary file in the same directory."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_fd, tmp_path = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(tmp_fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        Path(tmp_path).replace(path)
    except BaseException:
        Path(tmp_path).unlink(missing_ok=True)
        raise
    return path


def manifest_path(log_path: Path | str) -> Path:
    return Path(log_path).with_suffix(".json")


# ---------------------------------------------------------------------------
# CSV run log
# ---------------------------------------------------------------------------

def write_run_log(log: RunLog, path: Path | str) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(log.columns)
    for row in log.data:
        writer.writerow([FLOAT_FORMAT % v for v in row])
    out = atomic_write_text(path, buf.getvalue())
    write_manifest(out, {
        "controller": log.controller,
        "dt": log.dt,
        "rows": len(log),
        "status": log.status,
        "diagnostic": log.diagnostic,
    })
    return out


def load_run_log(path: Path | str) -> RunLog:
    """Read a CSV log back; controller and status come from the manifest when present."""
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        columns = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(-1, len(columns))
    meta = load_manifest(path)
    dt = meta.get("dt")
    if dt is None:
        dt = float(data[1, 0] - data[0, 0]) if len(data) > 1 else 0.0
    return RunLog(
        controller=meta.get("controller", path.stem),
        dt=float(dt),
        data=data,
        columns=columns,
        status=meta.get("status", STATUS_COMPLETED),
        diagnostic=meta.get("diagnostic", ""),
    )


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------

def write_manifest(log_path: Path | str, info: Mapping[str, Any]) -> Path:
    return atomic_write_text(
        manifest_path(log_path),
        json.dumps(dict(info), ensure_ascii=False, indent=2) + "\n",
    )


def load_manifest(log_path: Path | str) -> Dict[str, Any]:
    path = manifest_path(log_path)
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return {}


# ---------------------------------------------------------------------------
# Text report
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return f"{value:10.3e}"


def format_error_table(
    reports: Mapping[str, ErrorReport],
    diverged: Iterable[str] = (),
    published: bool = False,
) -> str:
    """Controllers as rows; max and rmse per channel as column pairs."""
    lines: List[str] = []
    header = f"{'controller':<10}" + "".join(f" {c + ' max':>10} {c + ' rmse':>10}" for c in CHANNELS)
    lines.append(header)
    lines.append("-" * len(header))
    for name, report in reports.items():
        cells = "".join(f" {_fmt(report.max_abs_error[c])} {_fmt(report.rmse[c])}" for c in CHANNELS)
        lines.append(f"{name:<10}{cells}")
    for name in diverged:
        lines.append(f"{name:<10} diverged")
    if published:
        lines.append("")
        lines.append("Published maximum errors during arm motion (orientation only):")
        for name, values in PUBLISHED_MAX_ERRORS.items():
            cells = ", ".join(f"{c} {v:.3e}" for c, v in values.items())
            lines.append(f"  {name:<8} {cells}")
    return "\n".join(lines)


def write_report(
    path: Path | str,
    reports: Mapping[str, ErrorReport],
    verdicts: Iterable[OrderingVerdict] = (),
    diverged: Mapping[str, str] | None = None,
    title: str = "Tracking error report",
) -> Path:
    diverged = dict(diverged or {})
    windows = {r.window for r in reports.values()}
    lines = [title, "=" * len(title)]
    for window in sorted(windows):
        lines.append(f"Evaluation window: [{window[0]:g} s, {window[1]:g} s]")
    lines.append("")
    lines.append(format_error_table(reports, diverged, published=len(reports) + len(diverged) > 1))
    verdicts = list(verdicts)
    if verdicts:
        lines.append("")
        lines.append("Ordering verdicts (max error):")
        lines.extend(f"  [{'ok' if v.holds else 'FAIL'}] {v}" for v in verdicts)
    if diverged:
        lines.append("")
        lines.extend(f"{name}: {text}" for name, text in diverged.items())
    return atomic_write_text(path, "\n".join(lines) + "\n")
