"""Tracking-error statistics, controller ordering and surface diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from scenarios.runlog import RunLog

CHANNELS = ("x", "y", "z", "phi", "theta", "psi")
ORDERING_CHANNELS = ("x", "y", "phi")
CONTROLLER_ORDER = ("FOFTSMC", "FTSMC", "PID")

# Published maximum errors during arm motion, for orientation in reports only.
PUBLISHED_MAX_ERRORS: Dict[str, Dict[str, float]] = {
    "PID": {"x": 8.46e-3, "y": 25.38e-3, "phi": 14.90e-3, "theta": 6.40e-3, "psi": 14.02e-5},
    "FTSMC": {"x": 7.91e-3, "y": 15.82e-3, "phi": 9.89e-3, "theta": 5.30e-3, "psi": 2.20e-5},
    "FOFTSMC": {"x": 0.97e-3, "y": 0.90e-3, "phi": 0.95e-3, "theta": 2.60e-3, "psi": 0.067e-5},
}

_GRID_TOL = 1e-9


class MetricsWindowError(ValueError):
    """Raised when an evaluation window selects no samples or leaves the log."""


@dataclass(frozen=True)
class ErrorReport:
    window: Tuple[float, float]
    max_abs_error: Dict[str, float]
    rmse: Dict[str, float]
    samples: int

    def row(self, channel: str) -> Tuple[float, float]:
        return self.max_abs_error[channel], self.rmse[channel]


@dataclass(frozen=True)
class OrderingVerdict:
    channel: str
    better: str
    worse: str
    better_value: float
    worse_value: float

    @property
    def holds(self) -> bool:
        return self.better_value < self.worse_value

    def __str__(self) -> str:
        sign = "<" if self.holds else ">="
        return f"{self.channel}: {self.better} {sign} {self.worse} ({self.better_value:.3e} vs {self.worse_value:.3e})"


def tracking_errors(log: RunLog) -> Dict[str, np.ndarray]:
    errors = {c: log.column(c) - log.column(f"{c}_ref") for c in CHANNELS}
    errors["psi"] = (errors["psi"] + math.pi) % (2.0 * math.pi) - math.pi
    return errors


def error_metrics(log: RunLog, window: Tuple[float, float]) -> ErrorReport:
    t_a, t_b = float(window[0]), float(window[1])
    t = log.t
    if len(t) == 0:
        raise MetricsWindowError("Log is empty")
    if t_a > t_b:
        raise MetricsWindowError(f"Window start {t_a} is after its end {t_b}")
    tol = _GRID_TOL * max(1.0, abs(t[-1]))
    if t_a < t[0] - tol or t_b > t[-1] + tol:
        raise MetricsWindowError(f"Window [{t_a}, {t_b}] leaves the log span [{t[0]}, {t[-1]}]")
    mask = (t >= t_a - tol) & (t <= t_b + tol)
    n = int(mask.sum())
    if n == 0:
        raise MetricsWindowError(f"Window [{t_a}, {t_b}] contains no grid points")

    max_abs: Dict[str, float] = {}
    rmse: Dict[str, float] = {}
    for channel, err in tracking_errors(log).items():
        e = err[mask]
        max_abs[channel] = float(np.max(np.abs(e)))
        # rmse <= max holds exactly; clamp away last-bit rounding.
        rmse[channel] = min(float(np.sqrt(np.mean(e * e))), max_abs[channel])
    return ErrorReport(window=(t_a, t_b), max_abs_error=max_abs, rmse=rmse, samples=n)


def ordering_verdicts(
    reports: Mapping[str, ErrorReport],
    channels: Sequence[str] = ORDERING_CHANNELS,
    order: Sequence[str] = CONTROLLER_ORDER,
) -> List[OrderingVerdict]:
    """Pairwise max-error comparisons, best-expected controller first."""
    present = [name for name in order if name in reports]
    verdicts: List[OrderingVerdict] = []
    for channel in channels:
        for i, better in enumerate(present):
            for worse in present[i + 1:]:
                verdicts.append(OrderingVerdict(
                    channel=channel,
                    better=better,
                    worse=worse,
                    better_value=reports[better].max_abs_error[channel],
                    worse_value=reports[worse].max_abs_error[channel],
                ))
    return verdicts


def first_layer_entry(times: Sequence[float], S: Sequence[float], eps: float) -> Optional[float]:
    """First grid time with |S| < eps, or None if the layer is never reached."""
    hits = np.flatnonzero(np.abs(np.asarray(S, dtype=float)) < eps)
    return float(np.asarray(times, dtype=float)[hits[0]]) if hits.size else None


def lyapunov_violations(log: RunLog, eps_position: float, eps_attitude: float) -> int:
    """Steps where V grows while every surface of that loop is outside its boundary layer."""
    S = log.surfaces
    count = 0
    for V, block, eps in (
        (log.column("V_out"), S[:, :3], eps_position),
        (log.column("V_in"), S[:, 3:], eps_attitude),
    ):
        outside = np.all(np.abs(block) > eps, axis=1)[:-1]
        grows = np.diff(V) > 0
        count += int(np.count_nonzero(outside & grows))
    return count
