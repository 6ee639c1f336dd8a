"""Oracle suites behind the ``validate`` command.

Each check measures one numerical property against an independent reference
and reports the measured deviation next to its tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from scipy.special import gamma as gamma_fn

from core.config import ArmConfig, ScenarioConfig, build_manipulator, build_plant_params
from fractional.grunwald import SampleHistory, frac_derivative, frac_integral
from plant.dynamics import (
    ControlWrench,
    VehicleState,
    coupled_derivative,
    momentum_functionals,
    rk4_step,
)
from plant.inertia import MassBudget, com_aggregate, manipulator_inertia, manipulator_inertia_rate, mutable_inertia
from scenarios.trajectories import joint_trajectory

SUITES = ("frac", "kinematics", "dynamics")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)


def _sampled(fn: Callable[[float], float], dt: float, t_end: float = 1.0) -> SampleHistory:
    n = int(round(t_end / dt)) + 1
    return SampleHistory(dt, capacity=n, samples=(fn(k * dt) for k in range(n)))


# ---------------------------------------------------------------------------
# Fractional operators
# ---------------------------------------------------------------------------

def _frac_checks() -> List[CheckResult]:
    dt = 1e-3
    half_integral = frac_integral(_sampled(lambda t: 1.0, dt), 0.5)
    exact_integral = 1.0 / gamma_fn(1.5)
    half_derivative = frac_derivative(_sampled(lambda t: t, dt), 0.5)
    exact_derivative = 1.0 / gamma_fn(1.5)

    def ramp_error(step: float) -> float:
        return abs(frac_derivative(_sampled(lambda t: t, step), 0.5) - exact_derivative)

    ratio = ramp_error(2e-3) / ramp_error(1e-3)
    return [
        CheckResult("frac", "I^0.5 of 1 at t=1 (relative)", abs(half_integral / exact_integral - 1.0), 1e-2),
        CheckResult("frac", "D^0.5 of t at t=1 (relative)", abs(half_derivative / exact_derivative - 1.0), 1e-2),
        CheckResult("frac", "first-order convergence (|ratio - 2|)", abs(ratio - 2.0), 0.2),
    ]


# ---------------------------------------------------------------------------
# Kinematics and mutable inertia
# ---------------------------------------------------------------------------

def _kinematics_checks() -> List[CheckResult]:
    arm_cfg = ArmConfig()
    arm = build_manipulator(arm_cfg)
    mass = MassBudget.from_links(2.65, arm.links)
    rng = np.random.default_rng(2024)
    step = 1e-6

    def com_positions(q: np.ndarray) -> np.ndarray:
        return np.array([k.com_pos for k in arm.kinematics(q, np.zeros(arm.dof))])

    jac_dev = 0.0
    for _ in range(100):
        q = rng.uniform(-math.pi, math.pi, arm.dof)
        kin = arm.kinematics(q, np.zeros(arm.dof))
        for i in range(arm.dof):
            dq = np.zeros(arm.dof)
            dq[i] = step
            fd = (com_positions(q + dq) - com_positions(q - dq)) / (2 * step)
            for j, k in enumerate(kin):
                jac_dev = max(jac_dev, float(np.max(np.abs(k.jac_v[:, i] - fd[j]))))

    def inertia_at(t: float) -> np.ndarray:
        js = joint_trajectory(t)
        return manipulator_inertia(arm.kinematics(js.q, js.qd), arm.links, mass)

    h = 1e-5
    rate_dev = 0.0
    for t in np.arange(11.0, 21.0):
        js = joint_trajectory(t)
        analytic = manipulator_inertia_rate(arm.kinematics(js.q, js.qd), arm.links, mass, js.qd)
        fd = (inertia_at(t + h) - inertia_at(t - h)) / (2 * h)
        rate_dev = max(rate_dev, float(np.max(np.abs(analytic - fd)) / np.max(np.abs(fd))))

    js = joint_trajectory(12.0)
    r_oc, r_oc1 = com_aggregate(arm.kinematics(js.q, js.qd), arm.links, mass)
    scaling = float(np.max(np.abs(r_oc1 - mass.m_UAM * r_oc / mass.m_m)))
    return [
        CheckResult("kinematics", "COM Jacobians vs central differences", jac_dev, 1e-6),
        CheckResult("kinematics", "arm inertia rate vs central differences (relative)", rate_dev, 1e-4),
        CheckResult("kinematics", "COM offset scaling identity", scaling, 0.0),
    ]


# ---------------------------------------------------------------------------
# Dynamics
# ---------------------------------------------------------------------------

def momentum_drift(duration: float = 5.0, dt: float = 1e-3) -> tuple[float, float, float]:
    """Coupled free flight with moving joints: max drift of P and L, and m_UAM.

    Gravity, thrust and torque are zero and the joints move from t = 0, so
    both momentum functionals must stay constant.
    """
    cfg = ScenarioConfig()
    cfg.plant.g = 0.0
    arm = build_manipulator(cfg.arm)
    params = build_plant_params(cfg)
    mass = params.mass
    u = ControlWrench(F=0.0, tau_b=np.zeros(3))

    def inertia_at(t: float):
        return mutable_inertia(arm, mass, joint_trajectory(t, switch_time=0.0), cfg.arm.fd_step)

    state = VehicleState.at_rest()
    P0, L0 = momentum_functionals(state, inertia_at(0.0), mass, params.I_b)
    dP = dL = 0.0
    for k in range(int(round(duration / dt))):
        t = k * dt
        state = rk4_step(
            state, dt, lambda off, s, t=t: coupled_derivative(s, inertia_at(t + off), params, u), t
        )
        P, L = momentum_functionals(state, inertia_at(t + dt), mass, params.I_b)
        dP = max(dP, float(np.max(np.abs(P - P0))))
        dL = max(dL, float(np.max(np.abs(L - L0))))
    return dP, dL, mass.m_UAM


def _rk4_ratio() -> float:
    def error(dt: float) -> float:
        state = VehicleState(p=[1.0, 0.0, 0.0], phi=np.zeros(3), v=np.zeros(3), omega_b=np.zeros(3))
        for _ in range(int(round(1.0 / dt))):
            state = rk4_step(state, dt, lambda off, s: np.concatenate([s.p, np.zeros(9)]))
        return abs(state.p[0] - math.e)

    return error(0.1) / error(0.05)


def _dynamics_checks() -> List[CheckResult]:
    dP, dL, m_uam = momentum_drift()
    ratio = _rk4_ratio()
    return [
        CheckResult("dynamics", "linear momentum drift / m_UAM", dP / m_uam, 1e-5),
        CheckResult("dynamics", "angular momentum drift", dL, 1e-4),
        CheckResult("dynamics", "RK4 Richardson ratio (|ratio - 16| / 16)", abs(ratio - 16.0) / 16.0, 0.1),
    ]


_SUITE_FUNCS: Dict[str, Callable[[], List[CheckResult]]] = {
    "frac": _frac_checks,
    "kinematics": _kinematics_checks,
    "dynamics": _dynamics_checks,
}


def run_suite(name: str = "all") -> List[CheckResult]:
    if name == "all":
        return [result for suite in SUITES for result in _SUITE_FUNCS[suite]()]
    if name not in _SUITE_FUNCS:
        raise ValueError(f"Unknown validation suite {name!r}; choose from all, {', '.join(SUITES)}")
    return _SUITE_FUNCS[name]()
