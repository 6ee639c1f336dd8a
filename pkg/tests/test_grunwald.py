"""
Grünwald–Letnikov operators: test suite.

 Group 1: Weights
   1. integer and identity orders reduce to difference / identity
   2. alpha = 0.5 matches the hand-evaluated recurrence
   3. every stored weight satisfies its recurrence exactly
   4. non-finite and out-of-range orders are rejected

 Group 2: SampleHistory
   5. capacity evicts the oldest sample, window stays contiguous
   6. non-finite samples and bad grids are rejected

 Group 3: Operators
   7. alpha = 0 returns the newest sample, alpha = 1 the backward difference
   8. analytic Riemann–Liouville oracles for t and constants
   9. linearity on a shared grid
  10. first-order convergence under dt halving
  11. empty histories raise
"""
from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from fractional.grunwald import (
    EmptyHistoryError,
    FractionalOrder,
    FractionalOrderError,
    SampleHistory,
    frac_derivative,
    frac_integral,
    gl_weights,
)

_DT = 1e-3


def _sampled(fn, dt: float, t_end: float = 1.0) -> SampleHistory:
    n = int(round(t_end / dt)) + 1
    h = SampleHistory(dt, capacity=n + 10)
    for k in range(n):
        h.append(fn(k * dt))
    return h


# ── Group 1: Weights ─────────────────────────────────────────────────────────

def test_integer_order_weights():
    assert list(gl_weights(1.0, 4).w) == [1.0, -1.0, 0.0, 0.0]
    assert list(gl_weights(0.0, 3).w) == [1.0, 0.0, 0.0]


def test_half_order_weights_by_hand():
    assert list(gl_weights(0.5, 4).w) == pytest.approx([1.0, -0.5, -0.125, -0.0625], abs=1e-15)


@pytest.mark.parametrize("alpha", [-1.5, -0.6, 0.2, 0.4, 0.8, 1.3])
def test_weight_recurrence_is_exact(alpha):
    w = gl_weights(alpha, 64).w
    assert w[0] == 1.0
    for k in range(1, len(w)):
        assert w[k] == w[k - 1] * (1.0 - (alpha + 1.0) / k), f"recurrence broken at k={k}"


@pytest.mark.parametrize("alpha", [float("nan"), float("inf"), 2.0, -2.5])
def test_invalid_order_rejected(alpha):
    with pytest.raises(FractionalOrderError):
        gl_weights(alpha, 4)
    with pytest.raises(FractionalOrderError):
        FractionalOrder(alpha)


def test_fractional_order_normalises_to_float():
    order = FractionalOrder(1)
    assert order.alpha == 1.0 and isinstance(order.alpha, float)
    assert gl_weights(1, 3).alpha == 1.0


def test_weight_count_must_be_positive():
    with pytest.raises(FractionalOrderError):
        gl_weights(0.5, 0)


# ── Group 2: SampleHistory ───────────────────────────────────────────────────

def test_history_evicts_oldest():
    h = SampleHistory(0.1, capacity=3)
    for x in range(1, 6):
        h.append(float(x))
    assert len(h) == 3
    assert list(h.values()) == [3.0, 4.0, 5.0]
    assert h.newest == 5.0


def test_history_window_before_full():
    h = SampleHistory(0.1, capacity=5, samples=[1.0, 2.0])
    assert list(h.values()) == [1.0, 2.0]


def test_history_rejects_bad_input():
    with pytest.raises(FractionalOrderError):
        SampleHistory(0.0, capacity=3)
    with pytest.raises(FractionalOrderError):
        SampleHistory(0.1, capacity=0)
    h = SampleHistory(0.1, capacity=3)
    with pytest.raises(FractionalOrderError):
        h.append(float("nan"))


def test_history_for_window_capacity():
    assert SampleHistory.for_window(1e-3, 2.0).capacity == 2000


# ── Group 3: Operators ───────────────────────────────────────────────────────

def test_zero_order_is_identity():
    h = SampleHistory(_DT, capacity=10, samples=[0.4, -1.2, 3.7])
    assert frac_derivative(h, 0.0) == 3.7


def test_first_order_is_backward_difference():
    h = SampleHistory(_DT, capacity=10, samples=[0.0, 0.001])
    assert frac_derivative(h, 1.0) == pytest.approx(1.0, rel=1e-12)
    h = SampleHistory(_DT, capacity=10, samples=[0.3, 0.71, 0.95])
    assert frac_derivative(h, 1.0) == (0.95 - 0.71) / _DT


def test_half_derivative_of_ramp():
    h = _sampled(lambda t: t, _DT)
    expected = 1.0 / gamma_fn(1.5)
    assert frac_derivative(h, 0.5) == pytest.approx(expected, rel=0.01)
    assert expected == pytest.approx(1.1284, abs=1e-4)


def test_unit_integral_of_constant():
    h = _sampled(lambda t: 2.0, _DT)
    assert frac_integral(h, 1.0) == pytest.approx(2.0, rel=0.01)


def test_half_integral_of_constant():
    h = _sampled(lambda t: 1.0, _DT)
    assert frac_integral(h, 0.5) == pytest.approx(1.0 / gamma_fn(1.5), rel=0.01)


def test_integral_matches_negative_derivative():
    h = _sampled(math.sin, _DT)
    assert frac_integral(h, 0.6) == frac_derivative(h, -0.6)


def test_integral_order_range():
    h = SampleHistory(_DT, capacity=4, samples=[1.0])
    for bad in (0.0, -0.3, 2.0):
        with pytest.raises(FractionalOrderError):
            frac_integral(h, bad)


def test_linearity():
    rng = np.random.default_rng(7)
    f = rng.normal(size=500)
    g = rng.normal(size=500)
    a, b = 1.7, -0.45
    hf = SampleHistory(_DT, 600, f)
    hg = SampleHistory(_DT, 600, g)
    hc = SampleHistory(_DT, 600, a * f + b * g)
    for alpha in (-0.8, 0.3, 0.9):
        combined = frac_derivative(hc, alpha)
        separate = a * frac_derivative(hf, alpha) + b * frac_derivative(hg, alpha)
        assert combined == pytest.approx(separate, rel=1e-10, abs=1e-9)


@pytest.mark.parametrize("p", [1, 2])
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_convergence_order(p, alpha):
    exact = gamma_fn(p + 1) / gamma_fn(p + 1 - alpha)
    errors = []
    for dt in (1e-2, 5e-3):
        h = _sampled(lambda t: t ** p, dt)
        errors.append(abs(frac_derivative(h, alpha) - exact))
    order = math.log2(errors[0] / errors[1])
    assert order >= 0.9, f"observed order {order:.3f} for p={p}, alpha={alpha}"


def test_short_memory_truncation_uses_window_only():
    h = SampleHistory(_DT, capacity=4)
    for x in (100.0, 1.0, 1.0, 1.0, 1.0):
        h.append(x)
    full = SampleHistory(_DT, capacity=4, samples=[1.0, 1.0, 1.0, 1.0])
    assert frac_derivative(h, -0.5) == frac_derivative(full, -0.5)


def test_empty_history_raises():
    h = SampleHistory(_DT, capacity=4)
    with pytest.raises(EmptyHistoryError):
        frac_derivative(h, 0.5)
    with pytest.raises(EmptyHistoryError):
        frac_integral(h, 0.5)
