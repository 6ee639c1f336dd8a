"""
Mutable inertia parameters: test suite.

 Group 1: skew and COM aggregation
 Group 2: COM rate and acceleration against finite differences along the joint trajectory
 Group 3: Arm inertia, its rate, PSD and symmetry
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from core.config import ArmConfig, build_manipulator
from plant.inertia import (
    MassBudget,
    MutableInertiaSet,
    com_accel,
    com_aggregate,
    com_rate,
    manipulator_inertia,
    manipulator_inertia_rate,
    mutable_inertia,
    skew,
)
from plant.kinematics import DHRow, JointState, LinkInertial, Manipulator
from scenarios.trajectories import joint_trajectory

_ARM = build_manipulator(ArmConfig())
_LINKS = _ARM.links
_MASS = MassBudget.from_links(2.65, _LINKS)


def _kin(js: JointState):
    return _ARM.kinematics(js.q, js.qd)


def _r_oc1(t: float) -> np.ndarray:
    js = joint_trajectory(t)
    return com_aggregate(_kin(js), _LINKS, _MASS)[1]


def _I_m(t: float) -> np.ndarray:
    js = joint_trajectory(t)
    return manipulator_inertia(_kin(js), _LINKS, _MASS)


# ── Group 1: skew and COM aggregation ───────────────────────────────────────

def test_skew_basics():
    assert not np.any(skew([0.0, 0.0, 0.0]))
    assert np.array_equal(skew([1.0, 0.0, 0.0]) @ np.array([0.0, 1.0, 0.0]), [0.0, 0.0, 1.0])


def test_skew_matches_cross_product():
    rng = np.random.default_rng(11)
    for _ in range(50):
        v, w = rng.normal(size=3), rng.normal(size=3)
        S = skew(v)
        assert np.allclose(S @ w, np.cross(v, w), rtol=0, atol=1e-15)
        assert np.array_equal(S.T, -S)


def test_mass_budget_totals():
    assert _MASS.m_m == pytest.approx(0.703, abs=1e-12)
    assert _MASS.m_UAM == pytest.approx(3.353, abs=1e-12)


def test_com_aggregate_zero_positions():
    arm = Manipulator(
        chain=[DHRow(0, 0, 0, 0)],
        links=[LinkInertial(0.3, np.zeros(3), np.zeros((3, 3)))],
    )
    mass = MassBudget.from_links(2.65, arm.links)
    r_oc, r_oc1 = com_aggregate(arm.kinematics([0.4], [0.0]), arm.links, mass)
    assert not np.any(r_oc) and not np.any(r_oc1)


def test_com_aggregate_single_link():
    m = 0.238
    arm = Manipulator(
        chain=[DHRow(0, 0, 0, 0)],
        links=[LinkInertial(m, np.array([0.0, 0.0, -0.1]), np.zeros((3, 3)))],
    )
    mass = MassBudget(m_b=3.353 - m, m_m=m)
    r_oc, r_oc1 = com_aggregate(arm.kinematics([0.0], [0.0]), arm.links, mass)
    assert r_oc == pytest.approx(np.array([0.0, 0.0, -0.1]) * m / 3.353, abs=1e-15)
    assert r_oc1 == pytest.approx([0.0, 0.0, -0.1], abs=1e-15)


def test_r_oc1_scaling_identity_exact():
    for t in (3.0, 12.0, 18.4):
        js = joint_trajectory(t)
        kin = _kin(js)
        r_oc, r_oc1 = com_aggregate(kin, _LINKS, _MASS)
        assert np.array_equal(r_oc1, _MASS.m_UAM * r_oc / _MASS.m_m)
        rate, rate1 = com_rate(kin, _LINKS, _MASS, js.qd)
        assert np.array_equal(rate1, _MASS.m_UAM * rate / _MASS.m_m)


def test_massless_arm_has_no_offset():
    links = [LinkInertial(0.0, link.com_local, np.zeros((3, 3))) for link in _LINKS]
    arm = Manipulator(chain=_ARM.chain, links=links)
    mass = MassBudget.from_links(2.65, links)
    mi = mutable_inertia(arm, mass, joint_trajectory(12.0))
    for field in ("r_oc", "r_oc1", "r_oc_dot", "r_oc1_dot", "r_oc1_ddot"):
        assert not np.any(getattr(mi, field)), field
    assert not np.any(mi.I_m)


# ── Group 2: COM rate and acceleration ──────────────────────────────────────

def test_com_rate_static_arm():
    js = joint_trajectory(5.0)
    assert not np.any(com_rate(_kin(js), _LINKS, _MASS, js.qd)[0])


def test_com_rate_linear_in_qd():
    js = joint_trajectory(13.0)
    kin = _kin(js)
    single = com_rate(kin, _LINKS, _MASS, js.qd)[0]
    double = com_rate(kin, _LINKS, _MASS, 2.0 * js.qd)[0]
    assert np.array_equal(double, 2.0 * single)


def test_com_rate_matches_finite_difference():
    h = 1e-5
    t = 12.0
    js = joint_trajectory(t)
    analytic = com_rate(_kin(js), _LINKS, _MASS, js.qd)[1]
    fd = (_r_oc1(t + h) - _r_oc1(t - h)) / (2 * h)
    assert np.max(np.abs(analytic - fd)) < 1e-6


def test_com_accel_static_is_zero():
    js = joint_trajectory(2.0)
    assert not np.any(com_accel(_ARM, _MASS, js.q, js.qd, js.qdd))


def test_com_accel_linear_in_qdd_when_still():
    q = np.array([0.2, -0.3, -math.pi / 2, 0.1])
    qdd = np.array([0.5, -1.0, 0.2, 0.3])
    a1 = com_accel(_ARM, _MASS, q, np.zeros(4), qdd)
    a2 = com_accel(_ARM, _MASS, q, np.zeros(4), 2.0 * qdd)
    assert a2 == pytest.approx(2.0 * a1, rel=1e-6, abs=1e-12)


def test_com_accel_matches_second_difference():
    h = 1e-3
    for t in (11.0, 12.0, 16.5):
        js = joint_trajectory(t)
        analytic = com_accel(_ARM, _MASS, js.q, js.qd, js.qdd)
        fd = (_r_oc1(t + h) - 2 * _r_oc1(t) + _r_oc1(t - h)) / (h * h)
        assert np.max(np.abs(analytic - fd)) < 1e-3, f"t={t}"


def test_com_accel_rejects_bad_step():
    js = joint_trajectory(12.0)
    with pytest.raises(ValueError):
        com_accel(_ARM, _MASS, js.q, js.qd, js.qdd, fd_step=0.0)


# ── Group 3: Arm inertia and rate ───────────────────────────────────────────

def test_point_mass_parallel_axis():
    m, d = 0.5, 0.2
    arm = Manipulator(
        chain=[DHRow(0, 0, 0, 0)],
        links=[LinkInertial(m, np.array([0.0, 0.0, d]), np.zeros((3, 3)))],
    )
    mass = MassBudget.from_links(2.65, arm.links)
    I = manipulator_inertia(arm.kinematics([0.0], [0.0]), arm.links, mass)
    assert I == pytest.approx(m * d * d * np.diag([1.0, 1.0, 0.0]), abs=1e-15)


def test_zero_links_at_origin():
    arm = Manipulator(
        chain=[DHRow(0, 0, 0, 0)] * 2,
        links=[LinkInertial(0.4, np.zeros(3), np.zeros((3, 3)))] * 2,
    )
    mass = MassBudget.from_links(2.65, arm.links)
    assert not np.any(manipulator_inertia(arm.kinematics([0.3, 0.1], [0, 0]), arm.links, mass))


def test_inertia_symmetric_and_psd():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        q = rng.uniform(-math.pi, math.pi, 4)
        I = manipulator_inertia(_ARM.kinematics(q, np.zeros(4)), _LINKS, _MASS)
        assert np.array_equal(I, I.T)
        assert np.linalg.eigvalsh(I)[0] >= -1e-12


def test_inertia_rate_static_is_zero():
    js = joint_trajectory(4.0)
    assert not np.any(manipulator_inertia_rate(_kin(js), _LINKS, _MASS, js.qd))


@pytest.mark.parametrize("t", [float(t) for t in range(11, 21)])
def test_inertia_rate_matches_finite_difference(t):
    h = 1e-5
    js = joint_trajectory(t)
    analytic = manipulator_inertia_rate(_kin(js), _LINKS, _MASS, js.qd)
    fd = (_I_m(t + h) - _I_m(t - h)) / (2 * h)
    rel = np.max(np.abs(analytic - fd)) / np.max(np.abs(fd))
    assert rel < 1e-4, f"relative deviation {rel:.3e} at t={t}"
    assert np.array_equal(analytic, analytic.T)


def test_static_arm_zeroes_every_rate():
    mi = mutable_inertia(_ARM, _MASS, JointState.at_rest([0.1, 0.2, -1.0, 0.3]))
    assert isinstance(mi, MutableInertiaSet)
    for field in ("r_oc_dot", "r_oc1_dot", "r_oc1_ddot", "I_m_dot"):
        assert not np.any(getattr(mi, field)), field
