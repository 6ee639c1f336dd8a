"""Thrust/attitude inversion between the position and attitude loops."""
from __future__ import annotations

import math

import numpy as np
import pytest

from controllers.allocation import ATTITUDE_LIMIT, InfeasibleCommandError, thrust_attitude_inversion
from plant.dynamics import E3, rotation_matrix
from plant.inertia import MassBudget

_MASS = MassBudget(m_b=2.65, m_m=0.703)
_G = 9.81


def test_hover_command():
    F, phi, theta = thrust_attitude_inversion(np.zeros(3), 0.0, _MASS, _G)
    assert F == pytest.approx(_MASS.m_UAM * _G, rel=1e-15)
    assert phi == 0.0 and theta == 0.0


def test_forward_acceleration_pitches_nose_down():
    _, phi, theta = thrust_attitude_inversion(np.array([1.0, 0.0, 0.0]), 0.0, _MASS, _G)
    assert theta == pytest.approx(math.atan2(-1.0, _G), abs=1e-15)
    assert phi == pytest.approx(0.0, abs=1e-15)


def test_inversion_realises_commanded_acceleration():
    rng = np.random.default_rng(8)
    for _ in range(50):
        u_p = rng.uniform(-2.0, 2.0, 3)
        psi = rng.uniform(-math.pi, math.pi)
        F, phi, theta = thrust_attitude_inversion(u_p, psi, _MASS, _G)
        assert abs(phi) < ATTITUDE_LIMIT and abs(theta) < ATTITUDE_LIMIT
        R = rotation_matrix(np.array([phi, theta, psi]))
        realised = -F * (R @ E3) / _MASS.m_UAM + _G * E3
        assert realised == pytest.approx(u_p, abs=1e-12)


def test_attitude_references_are_clipped():
    _, phi, theta = thrust_attitude_inversion(np.array([20.0, 20.0, 0.0]), 0.0, _MASS, _G)
    assert theta == -ATTITUDE_LIMIT
    assert phi == ATTITUDE_LIMIT


def test_custom_limit():
    _, _, theta = thrust_attitude_inversion(np.array([5.0, 0.0, 0.0]), 0.0, _MASS, _G, limit=0.1)
    assert theta == -0.1


@pytest.mark.parametrize("u_p", [[0.0, 0.0, _G], [0.0, 0.0, _G + 1.0], [3.0, 0.0, _G + 0.5]])
def test_infeasible_commands_raise(u_p):
    with pytest.raises(InfeasibleCommandError):
        thrust_attitude_inversion(np.array(u_p), 0.0, _MASS, _G)
