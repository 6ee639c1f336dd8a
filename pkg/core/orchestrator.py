"""Closed-loop scenario runner and the three-controller comparison."""
from __future__ import annotations

import asyncio
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from controllers.allocation import InfeasibleCommandError
from core.config import CONTROLLERS, ScenarioConfig, build_controller, build_manipulator, build_plant_params
from plant.dynamics import (
    DivergenceError,
    GimbalLockError,
    VehicleState,
    coupled_derivative,
    coupling_disturbance,
    rk4_step,
    state_derivative,
)
from plant.inertia import MutableInertiaSet, mutable_inertia
from scenarios.metrics import ErrorReport, OrderingVerdict, error_metrics, ordering_verdicts
from scenarios.runlog import LOG_COLUMNS, STATUS_COMPLETED, STATUS_DIVERGED, RunLog, log_row
from scenarios.trajectories import joint_trajectory, reference_trajectory

ProgressCallback = Callable[[int, int], None]

# Progress callbacks fire about this many times per run.
_PROGRESS_TICKS = 200


def _initial_state(cfg: ScenarioConfig) -> VehicleState:
    init = cfg.initial
    return VehicleState(p=init.position, phi=init.euler, v=init.velocity, omega_b=init.rates)


def run_scenario(
    cfg: ScenarioConfig,
    controller: str | None = None,
    on_progress: ProgressCallback | None = None,
) -> RunLog:
    """Simulate one controller on the configured scenario.

    Each step: joint state, mutable inertia, lagged coupling disturbance (also
    the controller's estimate), control, then one RK4 step of the plant.  A
    divergence or infeasible thrust command ends the run early and the partial
    log comes back flagged ``diverged``.
    """
    name = controller or cfg.controller
    dt = cfg.dt
    n_steps = cfg.steps
    arm = build_manipulator(cfg.arm)
    params = build_plant_params(cfg)
    mass = params.mass
    ctrl = build_controller(cfg, name)
    ctrl.reset()

    traj = cfg.trajectory
    switch = traj.joint_switch_time if traj.joints == "sine" else math.inf
    coupled = cfg.plant.model == "coupled"
    fd_step = cfg.arm.fd_step

    def inertia_at(t: float) -> MutableInertiaSet:
        return mutable_inertia(arm, mass, joint_trajectory(t, switch), fd_step)

    state = _initial_state(cfg)
    v_dot_prev = np.zeros(3)
    omega_dot_prev = np.zeros(3)
    rows: List[np.ndarray] = []
    every = max(1, n_steps // _PROGRESS_TICKS)
    status, diagnostic = STATUS_COMPLETED, ""

    for k in range(n_steps + 1):
        t = k * dt
        joints = joint_trajectory(t, switch)
        mi = mutable_inertia(arm, mass, joints, fd_step)
        ref = reference_trajectory(t, traj.hover_altitude, traj.takeoff_time)
        try:
            d = coupling_disturbance(state, mi, mass, omega_dot_prev, v_dot_prev, params.g)
            out = ctrl.update(state, ref, d)
        except (GimbalLockError, InfeasibleCommandError) as exc:
            status, diagnostic = STATUS_DIVERGED, f"t={t:.6f} s: {exc}"
            break
        row = log_row(
            t, state.p, state.phi, ref.p, out.att_ref, out.surfaces, out.u_p,
            out.wrench.F, out.wrench.tau_b, d.F_cd, d.tau_cd, joints.q,
        )
        if not np.all(np.isfinite(row)):
            status, diagnostic = STATUS_DIVERGED, f"t={t:.6f} s: non-finite control or disturbance"
            break
        rows.append(row)
        if on_progress and (k % every == 0 or k == n_steps):
            on_progress(k, n_steps)
        if k == n_steps:
            break

        u = out.wrench
        if coupled:
            stage_inertia = {0.0: mi}

            def provider(offset: float, s: VehicleState):
                if offset not in stage_inertia:
                    stage_inertia[offset] = inertia_at(t + offset)
                return coupled_derivative(s, stage_inertia[offset], params, u)
        else:
            def provider(offset: float, s: VehicleState):
                return state_derivative(s, u, d, params)

        try:
            new_state = rk4_step(state, dt, provider, t)
        except DivergenceError as exc:
            status, diagnostic = STATUS_DIVERGED, str(exc)
            break
        v_dot_prev = (new_state.v - state.v) / dt
        omega_dot_prev = (new_state.omega_b - state.omega_b) / dt
        state = new_state

    return RunLog(
        controller=name,
        dt=dt,
        data=np.array(rows) if rows else np.zeros((0, len(LOG_COLUMNS))),
        status=status,
        diagnostic=diagnostic,
    )


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    window: Tuple[float, float]
    logs: Dict[str, RunLog] = field(default_factory=dict)
    reports: Dict[str, ErrorReport] = field(default_factory=dict)
    verdicts: List[OrderingVerdict] = field(default_factory=list)

    @property
    def diverged(self) -> Dict[str, str]:
        return {name: log.diagnostic for name, log in self.logs.items() if log.diverged}

    @property
    def ordering_holds(self) -> bool:
        return bool(self.verdicts) and all(v.holds for v in self.verdicts)


def _run_named(cfg: ScenarioConfig, name: str) -> RunLog:
    return run_scenario(cfg, controller=name)


async def _run_all(
    cfg: ScenarioConfig,
    names: Sequence[str],
    parallel: bool,
    on_done: Callable[[str, RunLog], None] | None,
) -> Dict[str, RunLog]:
    logs: Dict[str, RunLog] = {}
    if not parallel:
        for name in names:
            logs[name] = _run_named(cfg, name)
            if on_done:
                on_done(name, logs[name])
        return logs

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=len(names)) as pool:
        futures = {name: loop.run_in_executor(pool, _run_named, cfg, name) for name in names}
        for name, fut in futures.items():
            logs[name] = await fut
            if on_done:
                on_done(name, logs[name])
    return logs


def compare_controllers(
    cfg: ScenarioConfig,
    controllers: Sequence[str] = CONTROLLERS,
    parallel: bool = True,
    on_done: Callable[[str, RunLog], None] | None = None,
) -> ComparisonReport:
    """Run every controller on the same scenario; diverged runs stay in the report."""
    window = cfg.metrics_window
    logs = asyncio.run(_run_all(cfg, list(controllers), parallel, on_done))
    report = ComparisonReport(window=window, logs=logs)
    for name, log in logs.items():
        if log.diverged:
            continue
        report.reports[name] = error_metrics(log, window)
    report.verdicts = ordering_verdicts(report.reports)
    return report
