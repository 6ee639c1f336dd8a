"""UAV plant with arm coupling: disturbance wrench, equations of motion, RK4 stepper.

Inertial frame is NED-like: +z points down, gravity acts along +e3 and thrust
along -R e3.  Altitude is therefore -z.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Tuple, Union

import numpy as np

from plant.inertia import MassBudget, MutableInertiaSet, skew

GRAVITY = 9.81
E3 = np.array([0.0, 0.0, 1.0])
_GIMBAL_MARGIN = 1e-9


class GimbalLockError(ArithmeticError):
    """Raised when pitch reaches +-pi/2 and the ZYX Euler map is singular."""


class DivergenceError(RuntimeError):
    """Raised when the integrated state becomes non-finite."""

    def __init__(self, message: str, t: float) -> None:
        super().__init__(message)
        self.t = t


# ---------------------------------------------------------------------------
# State and wrench types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VehicleState:
    p: np.ndarray
    phi: np.ndarray
    v: np.ndarray
    omega_b: np.ndarray

    def __post_init__(self) -> None:
        for name in ("p", "phi", "v", "omega_b"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(3))

    @classmethod
    def at_rest(cls, p=(0.0, 0.0, 0.0), phi=(0.0, 0.0, 0.0)) -> "VehicleState":
        return cls(p=np.asarray(p, float), phi=np.asarray(phi, float), v=np.zeros(3), omega_b=np.zeros(3))

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "VehicleState":
        return cls(p=x[0:3], phi=x[3:6], v=x[6:9], omega_b=x[9:12])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.p, self.phi, self.v, self.omega_b])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_vector())))


@dataclass(frozen=True)
class ControlWrench:
    F: float
    tau_b: np.ndarray

    def __post_init__(self) -> None:
        if not self.F >= 0:
            raise ValueError(f"Thrust must be non-negative, got {self.F!r}")
        object.__setattr__(self, "tau_b", np.asarray(self.tau_b, dtype=float).reshape(3))


@dataclass(frozen=True)
class DisturbanceWrench:
    F_cd: np.ndarray
    tau_cd: np.ndarray

    @classmethod
    def zero(cls) -> "DisturbanceWrench":
        return cls(F_cd=np.zeros(3), tau_cd=np.zeros(3))


@dataclass(frozen=True)
class PlantParams:
    mass: MassBudget
    I_b: np.ndarray
    g: float = GRAVITY

    def __post_init__(self) -> None:
        I_b = np.asarray(self.I_b, dtype=float)
        if I_b.shape == (3,):
            I_b = np.diag(I_b)
        if I_b.shape != (3, 3) or np.any(I_b - np.diag(np.diag(I_b))):
            raise ValueError("Body inertia must be a diagonal 3x3 matrix")
        if np.any(np.diag(I_b) <= 0):
            raise ValueError("Body inertia moments must be positive")
        if not self.g >= 0:
            raise ValueError(f"Gravity must be non-negative, got {self.g!r}")
        object.__setattr__(self, "I_b", I_b)

    @property
    def moments(self) -> np.ndarray:
        return np.diag(self.I_b).copy()


class StateDerivative(NamedTuple):
    p_dot: np.ndarray
    phi_dot: np.ndarray
    v_dot: np.ndarray
    omega_dot: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.p_dot, self.phi_dot, self.v_dot, self.omega_dot])


# ---------------------------------------------------------------------------
# Attitude kinematics
# ---------------------------------------------------------------------------

def _check_pitch(theta: float) -> None:
    if not np.cos(theta) > _GIMBAL_MARGIN or not abs(theta) < np.pi / 2:
        raise GimbalLockError(f"Pitch {theta!r} rad is at or beyond gimbal lock")


def rotation_matrix(phi: np.ndarray) -> np.ndarray:
    """Body-to-inertial rotation R = Rz(psi) Ry(theta) Rx(phi)."""
    roll, pitch, yaw = phi
    _check_pitch(pitch)
    cr, sr = np.cos(roll), np.sin(roll)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


def euler_rate(phi: np.ndarray, omega_b: np.ndarray) -> np.ndarray:
    roll, pitch, _ = phi
    _check_pitch(pitch)
    cr, sr = np.cos(roll), np.sin(roll)
    cp, tp = np.cos(pitch), np.tan(pitch)
    W = np.array([
        [1.0, sr * tp, cr * tp],
        [0.0, cr, -sr],
        [0.0, sr / cp, cr / cp],
    ])
    return W @ np.asarray(omega_b, dtype=float)


# ---------------------------------------------------------------------------
# Coupling disturbance
# ---------------------------------------------------------------------------

def _arm_moments(mi: MutableInertiaSet, mass: MassBudget):
    # First mass moment of the arm and its rates: m_m * r_oc1 == m_UAM * r_oc.
    c = mass.m_UAM * mi.r_oc
    c_dot = mass.m_UAM * mi.r_oc_dot
    c_ddot = mass.m_m * mi.r_oc1_ddot
    h = np.cross(c, mi.r_oc1_dot)
    return c, c_dot, c_ddot, h


def coupling_disturbance(
    state: VehicleState,
    mi: MutableInertiaSet,
    mass: MassBudget,
    omega_dot_prev: np.ndarray,
    v_dot_prev: np.ndarray,
    g: float = GRAVITY,
) -> DisturbanceWrench:
    """Force (inertial) and torque (body) the arm exerts on the airframe.

    Accelerations come from the previous step, so the wrench is a one-step
    lagged estimate of the exact coupling.
    """
    R = rotation_matrix(state.phi)
    w = state.omega_b
    c, c_dot, c_ddot, h = _arm_moments(mi, mass)

    F_cd = -R @ (np.cross(w, 2.0 * c_dot + np.cross(w, c)) + np.cross(omega_dot_prev, c) + c_ddot)

    gravity_b = R.T @ (g * E3)
    accel_b = R.T @ np.asarray(v_dot_prev, dtype=float)
    tau_cd = (
        np.cross(mi.I_m @ w, w)
        + np.cross(c, gravity_b - accel_b)
        - mi.I_m_dot @ w
        - np.cross(w, h)
        - np.cross(c, mi.r_oc1_ddot)
    )
    return DisturbanceWrench(F_cd=F_cd, tau_cd=tau_cd)


# ---------------------------------------------------------------------------
# Equations of motion
# ---------------------------------------------------------------------------

def state_derivative(
    state: VehicleState,
    u: ControlWrench,
    d: DisturbanceWrench,
    params: PlantParams,
) -> StateDerivative:
    """Simplified model: body inertia only, arm effects enter through *d*."""
    R = rotation_matrix(state.phi)
    m = params.mass.m_UAM
    v_dot = (-u.F * (R @ E3) + d.F_cd) / m + params.g * E3
    w = state.omega_b
    omega_dot = (u.tau_b + np.cross(params.I_b @ w, w) + d.tau_cd) / params.moments
    return StateDerivative(
        p_dot=state.v.copy(),
        phi_dot=euler_rate(state.phi, w),
        v_dot=v_dot,
        omega_dot=omega_dot,
    )


def coupled_accelerations(
    state: VehicleState,
    mi: MutableInertiaSet,
    params: PlantParams,
    u: ControlWrench,
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact translational/rotational accelerations of the coupled system.

    Solves the symmetric 6x6 mass-matrix system obtained from the rates of
    the linear and angular momentum with the arm motion prescribed.
    """
    mass = params.mass
    R = rotation_matrix(state.phi)
    w = state.omega_b
    c, c_dot, c_ddot, h = _arm_moments(mi, mass)
    I_tot = params.I_b + mi.I_m
    C = skew(c)

    M = np.zeros((6, 6))
    M[:3, :3] = mass.m_UAM * np.eye(3)
    M[:3, 3:] = -R @ C
    M[3:, :3] = C @ R.T
    M[3:, 3:] = I_tot

    rhs_t = (
        -u.F * (R @ E3)
        + mass.m_UAM * params.g * E3
        - R @ (np.cross(w, 2.0 * c_dot + np.cross(w, c)) + c_ddot)
    )
    rhs_r = (
        u.tau_b
        + np.cross(c, R.T @ (params.g * E3))
        - np.cross(w, I_tot @ w)
        - mi.I_m_dot @ w
        - np.cross(w, h)
        - np.cross(c, mi.r_oc1_ddot)
    )
    sol = np.linalg.solve(M, np.concatenate([rhs_t, rhs_r]))
    return sol[:3], sol[3:]


def coupled_derivative(
    state: VehicleState,
    mi: MutableInertiaSet,
    params: PlantParams,
    u: ControlWrench,
) -> StateDerivative:
    v_dot, omega_dot = coupled_accelerations(state, mi, params, u)
    return StateDerivative(
        p_dot=state.v.copy(),
        phi_dot=euler_rate(state.phi, state.omega_b),
        v_dot=v_dot,
        omega_dot=omega_dot,
    )


# ---------------------------------------------------------------------------
# Integrator
# ---------------------------------------------------------------------------

DerivativeProvider = Callable[[float, VehicleState], Union[StateDerivative, np.ndarray]]


def _eval(provider: DerivativeProvider, offset: float, x: np.ndarray) -> np.ndarray:
    d = provider(offset, VehicleState.from_vector(x))
    return d.as_vector() if isinstance(d, StateDerivative) else np.asarray(d, dtype=float)


def rk4_step(
    state: VehicleState,
    dt: float,
    provider: DerivativeProvider,
    t: float = 0.0,
) -> VehicleState:
    """One classical RK4 step.

    *provider* is called as ``provider(offset, state)`` with the stage offset
    in [0, dt] from the start of the step.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    x = state.as_vector()
    try:
        k1 = _eval(provider, 0.0, x)
        k2 = _eval(provider, 0.5 * dt, x + 0.5 * dt * k1)
        k3 = _eval(provider, 0.5 * dt, x + 0.5 * dt * k2)
        k4 = _eval(provider, dt, x + dt * k3)
    except (GimbalLockError, np.linalg.LinAlgError) as exc:
        raise DivergenceError(f"Integration failed at t={t:.6f} s: {exc}", t) from exc
    x_new = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(x_new)):
        raise DivergenceError(f"Non-finite state at t={t + dt:.6f} s", t + dt)
    return VehicleState.from_vector(x_new)


# ---------------------------------------------------------------------------
# Momentum functionals
# ---------------------------------------------------------------------------

def momentum_functionals(
    state: VehicleState,
    mi: MutableInertiaSet,
    mass: MassBudget,
    I_b: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Linear momentum P and angular momentum L about the inertial origin."""
    R = rotation_matrix(state.phi)
    w = state.omega_b
    c, c_dot, _, h = _arm_moments(mi, mass)
    I_b = np.diag(I_b) if np.ndim(I_b) == 1 else np.asarray(I_b, dtype=float)

    P = mass.m_UAM * state.v + R @ (np.cross(w, c) + c_dot)
    L = (
        np.cross(state.p, P)
        + np.cross(R @ c, state.v)
        + R @ ((I_b + mi.I_m) @ w + h)
    )
    return P, L
