"""Thrust/attitude inversion linking the position loop to the attitude loop."""
from __future__ import annotations

import math
from typing import Sequence, Tuple

import numpy as np

from plant.dynamics import E3, GRAVITY
from plant.inertia import MassBudget

ATTITUDE_LIMIT = 0.5
_MIN_THRUST_NORM = 1e-6


class InfeasibleCommandError(RuntimeError):
    """Raised when a commanded acceleration cannot be produced by upward thrust."""


def thrust_attitude_inversion(
    u_p: Sequence[float],
    psi_ref: float,
    mass: MassBudget,
    g: float = GRAVITY,
    limit: float = ATTITUDE_LIMIT,
) -> Tuple[float, float, float]:
    """Total thrust and roll/pitch references realising acceleration *u_p*."""
    s = g * E3 - np.asarray(u_p, dtype=float)
    norm = float(np.linalg.norm(s))
    if norm < _MIN_THRUST_NORM or s[2] <= 0:
        raise InfeasibleCommandError(
            f"Commanded acceleration {np.asarray(u_p).tolist()} needs non-positive thrust (s={s.tolist()})"
        )
    sp, cp = math.sin(psi_ref), math.cos(psi_ref)
    phi_ref = math.asin(max(-1.0, min(1.0, (s[0] * sp - s[1] * cp) / norm)))
    theta_ref = math.atan2(s[0] * cp + s[1] * sp, s[2])
    phi_ref = max(-limit, min(limit, phi_ref))
    theta_ref = max(-limit, min(limit, theta_ref))
    return mass.m_UAM * norm, phi_ref, theta_ref
