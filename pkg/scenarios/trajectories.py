"""Joint and airframe reference trajectories for the hover/arm-motion experiment."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from plant.kinematics import JointState

JOINT_SWITCH_TIME = 10.0
TAKEOFF_TIME = 5.0
HOVER_ALTITUDE = 1.0

# (amplitude, period) of the sinusoidal joints after switch-on.
_JOINT1 = (math.pi / 5.0, 30.0)
_JOINT2 = (math.pi / 3.0, 20.0)
_FOLDED_ELBOW = -math.pi / 2.0


@dataclass(frozen=True)
class ReferenceSample:
    p: np.ndarray
    v: np.ndarray
    a: np.ndarray
    psi: float = 0.0

    @property
    def altitude(self) -> float:
        return float(-self.p[2])


def _sine(amplitude: float, period: float, tau: float):
    w = 2.0 * math.pi / period
    s, c = math.sin(w * tau), math.cos(w * tau)
    return amplitude * s, amplitude * w * c, -amplitude * w * w * s


def joint_trajectory(t: float, switch_time: float = JOINT_SWITCH_TIME) -> JointState:
    """Joint angles, rates and accelerations; arm folded and still before switch-on.

    Joints 1 and 2 follow sinusoids from *switch_time* on, joint 3 stays at
    -pi/2 and joint 4 at zero.  Pass ``math.inf`` to keep the arm static.
    """
    if t < 0:
        raise ValueError(f"Trajectory time must be non-negative, got {t!r}")
    q = np.array([0.0, 0.0, _FOLDED_ELBOW, 0.0])
    qd = np.zeros(4)
    qdd = np.zeros(4)
    if t >= switch_time:
        tau = t - switch_time
        q[0], qd[0], qdd[0] = _sine(*_JOINT1, tau)
        q[1], qd[1], qdd[1] = _sine(*_JOINT2, tau)
    return JointState(q=q, qd=qd, qdd=qdd)


def reference_trajectory(
    t: float,
    altitude: float = HOVER_ALTITUDE,
    takeoff_time: float = TAKEOFF_TIME,
) -> ReferenceSample:
    """Quintic climb from the origin to *altitude*, then hover; x = y = psi = 0."""
    if t < 0:
        raise ValueError(f"Trajectory time must be non-negative, got {t!r}")
    if takeoff_time <= 0 or t >= takeoff_time:
        s, sd, sdd = 1.0, 0.0, 0.0
    else:
        T = takeoff_time
        x = t / T
        s = x ** 3 * (10.0 - 15.0 * x + 6.0 * x * x)
        sd = 30.0 * x * x * (1.0 - x) ** 2 / T
        sdd = 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x) / (T * T)
    # Altitude is -z.
    return ReferenceSample(
        p=np.array([0.0, 0.0, -altitude * s]),
        v=np.array([0.0, 0.0, -altitude * sd]),
        a=np.array([0.0, 0.0, -altitude * sdd]),
    )
