"""Mutable inertia parameters of the arm about the UAV body origin."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from plant.kinematics import JointState, LinkInertial, LinkKinematics, Manipulator

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class MassBudget:
    m_b: float
    m_m: float

    def __post_init__(self) -> None:
        if not self.m_b > 0:
            raise ValueError(f"UAV mass must be positive, got {self.m_b!r}")
        if not self.m_m >= 0:
            raise ValueError(f"Manipulator mass must be non-negative, got {self.m_m!r}")

    @property
    def m_UAM(self) -> float:
        return self.m_b + self.m_m

    @classmethod
    def from_links(cls, m_b: float, links: Sequence[LinkInertial]) -> "MassBudget":
        return cls(m_b=m_b, m_m=float(sum(link.mass for link in links)))


@dataclass(frozen=True)
class MutableInertiaSet:
    r_oc: np.ndarray
    r_oc_dot: np.ndarray
    r_oc1: np.ndarray
    r_oc1_dot: np.ndarray
    r_oc1_ddot: np.ndarray
    I_m: np.ndarray
    I_m_dot: np.ndarray

    @classmethod
    def zeros(cls) -> "MutableInertiaSet":
        z = np.zeros(3)
        return cls(z, z, z, z, z, np.zeros((3, 3)), np.zeros((3, 3)))


def skew(v: Sequence[float]) -> np.ndarray:
    x, y, z = v
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def _parallel_axis(p: np.ndarray) -> np.ndarray:
    return float(p @ p) * np.eye(3) - np.outer(p, p)


def _parallel_axis_rate(p: np.ndarray, v: np.ndarray) -> np.ndarray:
    return 2.0 * float(p @ v) * np.eye(3) - (np.outer(v, p) + np.outer(p, v))


def _scale_to_arm(x: np.ndarray, mass: MassBudget) -> np.ndarray:
    if mass.m_m == 0:
        return np.zeros(3)
    return mass.m_UAM * x / mass.m_m


# ---------------------------------------------------------------------------
# Aggregates
# ---------------------------------------------------------------------------

def com_aggregate(
    kin: Sequence[LinkKinematics],
    links: Sequence[LinkInertial],
    mass: MassBudget,
) -> Tuple[np.ndarray, np.ndarray]:
    moment = np.zeros(3)
    for k, link in zip(kin, links):
        moment += link.mass * k.com_pos
    r_oc = moment / mass.m_UAM
    return r_oc, _scale_to_arm(r_oc, mass)


def com_rate(
    kin: Sequence[LinkKinematics],
    links: Sequence[LinkInertial],
    mass: MassBudget,
    qd: Sequence[float],
) -> Tuple[np.ndarray, np.ndarray]:
    qd = np.asarray(qd, dtype=float)
    rate = np.zeros(3)
    for k, link in zip(kin, links):
        rate += link.mass * (k.jac_v @ qd)
    r_oc_dot = rate / mass.m_UAM
    return r_oc_dot, _scale_to_arm(r_oc_dot, mass)


def manipulator_inertia(
    kin: Sequence[LinkKinematics],
    links: Sequence[LinkInertial],
    mass: MassBudget,
) -> np.ndarray:
    """Arm inertia about the body origin, in body axes."""
    total = np.zeros((3, 3))
    for k, link in zip(kin, links):
        R = k.rotation
        total += R @ link.inertia_local @ R.T + link.mass * _parallel_axis(k.com_pos)
    return 0.5 * (total + total.T)


def manipulator_inertia_rate(
    kin: Sequence[LinkKinematics],
    links: Sequence[LinkInertial],
    mass: MassBudget,
    qd: Sequence[float],
) -> np.ndarray:
    qd = np.asarray(qd, dtype=float)
    total = np.zeros((3, 3))
    for k, link in zip(kin, links):
        R = k.rotation
        S = skew(k.jac_w @ qd)
        I_world = R @ link.inertia_local @ R.T
        total += S @ I_world - I_world @ S
        total += link.mass * _parallel_axis_rate(k.com_pos, k.jac_v @ qd)
    return 0.5 * (total + total.T)


def com_accel(
    arm: Manipulator,
    mass: MassBudget,
    q: Sequence[float],
    qd: Sequence[float],
    qdd: Sequence[float],
    fd_step: float = DEFAULT_FD_STEP,
) -> np.ndarray:
    """Second rate of r_oc1 by central differencing com_rate along (qd, qdd)."""
    if not fd_step > 0:
        raise ValueError(f"fd_step must be positive, got {fd_step!r}")
    q, qd, qdd = (np.asarray(x, dtype=float) for x in (q, qd, qdd))
    h = fd_step
    q_fwd = q + h * qd + 0.5 * h * h * qdd
    q_bwd = q - h * qd + 0.5 * h * h * qdd
    qd_fwd = qd + h * qdd
    qd_bwd = qd - h * qdd
    _, fwd = com_rate(arm.kinematics(q_fwd, qd_fwd), arm.links, mass, qd_fwd)
    _, bwd = com_rate(arm.kinematics(q_bwd, qd_bwd), arm.links, mass, qd_bwd)
    return (fwd - bwd) / (2.0 * h)


def mutable_inertia(
    arm: Manipulator,
    mass: MassBudget,
    joints: JointState,
    fd_step: float = DEFAULT_FD_STEP,
) -> MutableInertiaSet:
    """Every mutable inertia quantity for one joint state."""
    kin = arm.kinematics(joints.q, joints.qd)
    r_oc, r_oc1 = com_aggregate(kin, arm.links, mass)
    r_oc_dot, r_oc1_dot = com_rate(kin, arm.links, mass, joints.qd)
    return MutableInertiaSet(
        r_oc=r_oc,
        r_oc_dot=r_oc_dot,
        r_oc1=r_oc1,
        r_oc1_dot=r_oc1_dot,
        r_oc1_ddot=com_accel(arm, mass, joints.q, joints.qd, joints.qdd, fd_step),
        I_m=manipulator_inertia(kin, arm.links, mass),
        I_m_dot=manipulator_inertia_rate(kin, arm.links, mass, joints.qd),
    )
