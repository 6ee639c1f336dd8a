"""
Modified-DH kinematics: test suite.

 Group 1: Single transforms
   1. zero row is the identity
   2. first arm row is a pure translation
   3. elbow row equals the hand-multiplied elementary transforms

 Group 2: Chain
   4. zero-link chain returns only the mount
   5. chain matches an independent elementary-transform oracle
   6. joint 1 rotates frame 1 about the base z-axis
   7. rotation blocks stay orthonormal

 Group 3: COM kinematics and Jacobians
   8. qd = 0 gives zero velocities
   9. geometric Jacobians match central differences
  10. directional derivative consistency
  11. COM on the joint axis zeroes its J_v column

 Group 4: Inertial data validation
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from plant.kinematics import (
    DHRow,
    LinkInertial,
    Manipulator,
    forward_kinematics,
    link_com_kinematics,
    link_transform,
)

# ── Shared fixtures ───────────────────────────────────────────────────────────

_CHAIN = [
    DHRow(0.0, 0.012, 0.0935, 0.0),
    DHRow(-math.pi / 2, 0.0, 0.0, -1.3855),
    DHRow(0.0, 0.13023, 0.0, 1.3855),
    DHRow(0.0, 0.124, 0.0, 0.0),
]
_INERTIA = np.array([[290.2, 0.3, 32.5], [0.3, 324.2, 2.1], [32.5, 2.1, 141.3]]) * 1e-6
_LINKS = [
    LinkInertial(0.238, np.array([-0.0068, 0.0003, -0.0488]), _INERTIA),
    LinkInertial(0.123, np.array([0.1071, -0.0106, 0.0005]), _INERTIA),
    LinkInertial(0.118, np.array([0.0943, 0.0, 0.0005]), _INERTIA),
    LinkInertial(0.224, np.array([0.0605, 0.0061, 0.0]), _INERTIA),
]
_ARM = Manipulator(chain=_CHAIN, links=_LINKS)
_RNG_SEED = 2024


def _rx(a):
    c, s = math.cos(a), math.sin(a)
    T = np.eye(4)
    T[1:3, 1:3] = [[c, -s], [s, c]]
    return T


def _rz(a):
    c, s = math.cos(a), math.sin(a)
    T = np.eye(4)
    T[0:2, 0:2] = [[c, -s], [s, c]]
    return T


def _tx(x):
    T = np.eye(4)
    T[0, 3] = x
    return T


def _tz(z):
    T = np.eye(4)
    T[2, 3] = z
    return T


def _oracle_chain(q):
    T = np.eye(4)
    out = []
    for row, qi in zip(_CHAIN, q):
        T = T @ _rx(row.alpha_prev) @ _tx(row.a_prev) @ _rz(row.theta_offset + qi) @ _tz(row.d)
        out.append(T)
    return out


def _com_positions(q):
    return np.array([k.com_pos for k in _ARM.kinematics(q, np.zeros(4))])


# ── Group 1: Single transforms ──────────────────────────────────────────────

def test_zero_row_is_identity():
    assert np.array_equal(link_transform(DHRow(0, 0, 0, 0), 0.0), np.eye(4))


def test_first_row_translation():
    T = link_transform(_CHAIN[0], 0.0)
    assert np.allclose(T[:3, :3], np.eye(3), atol=0)
    assert np.allclose(T[:3, 3], [0.012, 0.0, 0.0935], atol=1e-15)


def test_elbow_row_by_hand():
    T = link_transform(_CHAIN[1], 0.0)
    expected = _rx(-math.pi / 2) @ _rz(-1.3855)
    assert np.max(np.abs(T - expected)) < 1e-15


# ── Group 2: Chain ──────────────────────────────────────────────────────────

def test_zero_link_chain():
    frames = forward_kinematics([], [])
    assert len(frames) == 1
    assert np.array_equal(frames[0], np.eye(4))


def test_chain_matches_oracle_at_zero():
    frames = forward_kinematics(_CHAIN, np.zeros(4))[1:]
    for T, T_ref in zip(frames, _oracle_chain(np.zeros(4))):
        assert np.max(np.abs(T[:3, 3] - T_ref[:3, 3])) < 1e-12


def test_chain_matches_oracle_random():
    rng = np.random.default_rng(_RNG_SEED)
    for _ in range(20):
        q = rng.uniform(-math.pi, math.pi, 4)
        for T, T_ref in zip(forward_kinematics(_CHAIN, q)[1:], _oracle_chain(q)):
            assert np.max(np.abs(T - T_ref)) < 1e-12


def test_joint_one_rotates_frame_one():
    x0 = forward_kinematics(_CHAIN, [0, 0, 0, 0])[1][:3, 0]
    x1 = forward_kinematics(_CHAIN, [math.pi / 2, 0, 0, 0])[1][:3, 0]
    z0 = np.array([0.0, 0.0, 1.0])
    assert np.allclose(x1, np.cross(z0, x0), atol=1e-15)


def test_rotation_blocks_orthonormal():
    rng = np.random.default_rng(_RNG_SEED + 1)
    for _ in range(50):
        for T in forward_kinematics(_CHAIN, rng.uniform(-3, 3, 4)):
            R = T[:3, :3]
            assert np.max(np.abs(R.T @ R - np.eye(3))) < 1e-12
            assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_mount_premultiplies_chain():
    mount = np.eye(4)
    mount[:3, 3] = [0.0, 0.0, 0.05]
    plain = forward_kinematics(_CHAIN, [0.1, 0.2, 0.3, 0.4])
    mounted = forward_kinematics(_CHAIN, [0.1, 0.2, 0.3, 0.4], mount)
    assert np.allclose(mounted[-1], mount @ plain[-1], atol=1e-15)


# ── Group 3: COM kinematics and Jacobians ───────────────────────────────────

def test_static_arm_has_zero_velocities():
    for k in _ARM.kinematics([0.3, -0.2, -1.5, 0.1], np.zeros(4)):
        assert not np.any(k.com_vel)
        assert not np.any(k.ang_vel)


def test_jacobians_match_finite_differences():
    rng = np.random.default_rng(_RNG_SEED + 2)
    step = 1e-6
    worst = 0.0
    for _ in range(100):
        q = rng.uniform(-math.pi, math.pi, 4)
        kin = _ARM.kinematics(q, np.zeros(4))
        for i in range(4):
            dq = np.zeros(4)
            dq[i] = step
            fd = (_com_positions(q + dq) - _com_positions(q - dq)) / (2 * step)
            for j, k in enumerate(kin):
                worst = max(worst, float(np.max(np.abs(k.jac_v[:, i] - fd[j]))))
    assert worst < 1e-6, f"max Jacobian deviation {worst:.3e}"


def test_directional_derivative_consistency():
    rng = np.random.default_rng(_RNG_SEED + 3)
    eps = 1e-5
    for _ in range(10):
        q = rng.uniform(-2, 2, 4)
        qd = rng.normal(size=4)
        fd = (_com_positions(q + eps * qd) - _com_positions(q - eps * qd)) / (2 * eps)
        vel = np.array([k.com_vel for k in _ARM.kinematics(q, qd)])
        assert np.max(np.abs(vel - fd)) < 1e-8


def test_angular_velocity_is_jacobian_product():
    qd = np.array([0.3, -0.1, 0.7, 0.2])
    for k in _ARM.kinematics([0.2, 0.4, -1.0, 0.5], qd):
        assert np.array_equal(k.ang_vel, k.jac_w @ qd)
        assert np.array_equal(k.com_vel, k.jac_v @ qd)


def test_distal_columns_are_zero():
    kin = _ARM.kinematics([0.2, 0.4, -1.0, 0.5], np.zeros(4))
    for j, k in enumerate(kin):
        assert not np.any(k.jac_v[:, j + 1:])
        assert not np.any(k.jac_w[:, j + 1:])


def test_com_on_joint_axis_has_zero_column():
    link = LinkInertial(0.5, np.array([0.0, 0.0, 0.3]), np.zeros((3, 3)))
    (k,) = link_com_kinematics([DHRow(0, 0, 0, 0)], [link], [0.7], [1.0])
    assert not np.any(k.jac_v[:, 0])


# ── Group 4: Inertial data validation ───────────────────────────────────────

def test_table_inertia_is_valid():
    for link in _LINKS:
        assert link.inertia_local.shape == (3, 3)


def test_asymmetric_inertia_rejected():
    bad = np.diag([1.0, 1.0, 1.0])
    bad[0, 1] = 0.5
    with pytest.raises(ValueError):
        LinkInertial(1.0, np.zeros(3), bad)


def test_triangle_inequality_enforced():
    with pytest.raises(ValueError):
        LinkInertial(1.0, np.zeros(3), np.diag([1.0, 1.0, 3.0]))


def test_negative_mass_rejected():
    with pytest.raises(ValueError):
        LinkInertial(-0.1, np.zeros(3), np.zeros((3, 3)))
