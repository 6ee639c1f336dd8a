"""Fractional-order fast terminal sliding-mode control (FOFTSMC) and its integer-order baseline.

Per channel the surface is

    S = e_dot + D^(g1-1)[c1 sig^D(e)] + sat(e/delta) I^(g2)[c2 |e|^I]

and the control is an equivalent term cancelling the surface dynamics plus a
saturated reaching law.  Setting g1 = g2 = 1 turns every fractional operator
into its integer-order counterpart, which is the FTSMC baseline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import List, Tuple

import numpy as np

from controllers.allocation import ATTITUDE_LIMIT, thrust_attitude_inversion
from controllers.base import ControlOutput, FlightController
from fractional.grunwald import SampleHistory, frac_derivative, frac_integral
from plant.dynamics import ControlWrench, DisturbanceWrench, PlantParams, VehicleState, euler_rate
from scenarios.trajectories import ReferenceSample

DEFAULT_EPSILON = 1e-3
DEFAULT_DELTA = 2e-3
SINGULARITY_FLOOR = 1e-6
MEMORY_WINDOW = 1.0
FILTER_FREQUENCY = 10.0
FILTER_DAMPING = 0.7
EQUIVALENT_FORMS = ("printed", "derivative")


@dataclass(frozen=True)
class SurfaceParams:
    gamma1: float
    gamma2: float
    D_exp: float
    I_exp: float
    c1: float
    c2: float

    def __post_init__(self) -> None:
        # Order 1 is allowed: it is the integer-order degenerate case.
        for name in ("gamma1", "gamma2"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")
        if not 1.0 < self.D_exp < 2.0:
            raise ValueError(f"D_exp must lie in (1, 2), got {self.D_exp!r}")
        for name in ("I_exp", "c1", "c2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    def integer_order(self) -> "SurfaceParams":
        return replace(self, gamma1=1.0, gamma2=1.0)


@dataclass(frozen=True)
class ReachingGains:
    h1: float
    h2: float

    def __post_init__(self) -> None:
        if not (self.h1 > 0 and self.h2 > 0):
            raise ValueError(f"Reaching gains must be positive, got h1={self.h1!r}, h2={self.h2!r}")


@dataclass(frozen=True)
class AttitudeChannelModel:
    """Channel model omega_dot_a = lambda_a * tau_a - mu_a."""

    lambda_a: float
    mu_a: float

    def __post_init__(self) -> None:
        if not self.lambda_a > 0:
            raise ValueError(f"lambda_a must be positive, got {self.lambda_a!r}")

    @classmethod
    def from_plant(
        cls,
        axis: int,
        omega_b: np.ndarray,
        tau_cd: np.ndarray,
        I_b: np.ndarray,
    ) -> "AttitudeChannelModel":
        J = float(I_b[axis, axis])
        lumped = np.cross(I_b @ omega_b, omega_b) + tau_cd
        return cls(lambda_a=1.0 / J, mu_a=-float(lumped[axis]) / J)


# ---------------------------------------------------------------------------
# Scalar building blocks
# ---------------------------------------------------------------------------

def signed_power(x: float, a: float) -> float:
    """|x|^a * sign(x), zero at the origin."""
    if not a > 0:
        raise ValueError(f"Exponent must be positive, got {a!r}")
    if x == 0:
        return 0.0
    return math.copysign(abs(x) ** a, x)


def sat(x: float) -> float:
    return max(-1.0, min(1.0, x))


class TrackingError:
    """Error of one channel and the sampled histories feeding its surface.

    The histories hold c1 sig^D(e), c2 |e|^I and c2 I |e|^(I-1); the last one
    only enters the printed equivalent control.
    """

    def __init__(
        self,
        sp: SurfaceParams,
        dt: float,
        window: float = MEMORY_WINDOW,
        floor: float = SINGULARITY_FLOOR,
    ) -> None:
        self.sp = sp
        self.floor = floor
        self.e = 0.0
        self.e_dot = 0.0
        self.d_input = SampleHistory.for_window(dt, window)
        self.i_input = SampleHistory.for_window(dt, window)
        self.v_input = SampleHistory.for_window(dt, window)

    def update(self, e: float, e_dot: float) -> None:
        sp = self.sp
        self.e = float(e)
        self.e_dot = float(e_dot)
        mag = abs(self.e)
        self.d_input.append(sp.c1 * signed_power(self.e, sp.D_exp))
        self.i_input.append(sp.c2 * mag ** sp.I_exp)
        self.v_input.append(sp.c2 * sp.I_exp * max(mag, self.floor) ** (sp.I_exp - 1.0))

    def reset(self) -> None:
        self.e = 0.0
        self.e_dot = 0.0
        for h in (self.d_input, self.i_input, self.v_input):
            h.clear()


def _op(h: SampleHistory, alpha: float) -> float:
    # Cold start: no samples means the operator contributes nothing.
    return frac_derivative(h, alpha) if len(h) else 0.0


def fo_surface(err: TrackingError, sp: SurfaceParams, delta: float = DEFAULT_DELTA) -> float:
    memory = frac_integral(err.i_input, sp.gamma2) if len(err.i_input) else 0.0
    return err.e_dot + _op(err.d_input, sp.gamma1 - 1.0) + sat(err.e / delta) * memory


def equivalent_control(
    ref_acc: float,
    err: TrackingError,
    sp: SurfaceParams,
    form: str = "printed",
    delta: float = DEFAULT_DELTA,
) -> float:
    """Control cancelling the surface dynamics so that S_dot = 0.

    ``printed`` multiplies e_dot onto I^(g2)[c2 I |e|^(I-1)].  ``derivative``
    uses the exact rate of the surface's memory term instead.
    """
    if form not in EQUIVALENT_FORMS:
        raise ValueError(f"Unknown equivalent-control form {form!r}")
    d_term = _op(err.d_input, sp.gamma1)
    if form == "printed":
        memory_rate = err.e_dot * (frac_integral(err.v_input, sp.gamma2) if len(err.v_input) else 0.0)
    else:
        memory_rate = sat(err.e / delta) * _op(err.i_input, 1.0 - sp.gamma2)
        if abs(err.e) < delta and len(err.i_input):
            memory_rate += err.e_dot / delta * frac_integral(err.i_input, sp.gamma2)
    return ref_acc - d_term - memory_rate


def reaching_control(
    S: float,
    g: ReachingGains,
    F_cdp: float = 0.0,
    eps: float = DEFAULT_EPSILON,
) -> float:
    return -(g.h1 + abs(F_cdp) + g.h2 * abs(S)) * sat(S / eps)


def finite_time_bound(V0: float, kappa1: float, kappa2: float, lam: float, t0: float = 0.0) -> float:
    """Settling-time bound for V_dot <= -kappa1 V - kappa2 V^lam, 0 < lam < 1."""
    if V0 < 0:
        raise ValueError(f"V0 must be non-negative, got {V0!r}")
    if not (kappa1 > 0 and kappa2 > 0 and 0 < lam < 1):
        raise ValueError("kappa1, kappa2 must be positive and lam in (0, 1)")
    return t0 + math.log(kappa1 * V0 ** (1.0 - lam) / kappa2 + 1.0) / (kappa1 * (1.0 - lam))


def reaching_time_bound(V0: float, g: ReachingGains, t0: float = 0.0) -> float:
    if V0 < 0:
        raise ValueError(f"V0 must be non-negative, got {V0!r}")
    return t0 + math.log(math.sqrt(2.0) * g.h2 * math.sqrt(V0) / g.h1 + 1.0) / g.h2


# ---------------------------------------------------------------------------
# Attitude command filter
# ---------------------------------------------------------------------------

class CommandFilter:
    """Second-order command filter producing a smooth reference and its two rates.

    y'' = wn^2 (r - y) - 2 zeta wn y', stepped with semi-implicit Euler.  The
    first input seeds the state at rest, so a constant command passes through
    unchanged with zero rates.
    """

    def __init__(self, dt: float, wn: float = FILTER_FREQUENCY, zeta: float = FILTER_DAMPING) -> None:
        if not (dt > 0 and wn > 0 and zeta > 0):
            raise ValueError(f"dt, wn and zeta must be positive (dt={dt}, wn={wn}, zeta={zeta})")
        if wn * dt >= 0.5:
            raise ValueError(f"Filter frequency {wn} rad/s is too high for dt={dt}")
        self.dt = dt
        self.wn = wn
        self.zeta = zeta
        self._y: np.ndarray | None = None
        self._y_dot: np.ndarray | None = None

    def update(self, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Filtered value, rate and acceleration at this step, then advance one step."""
        r = np.asarray(r, dtype=float)
        if self._y is None:
            self._y = r.copy()
            self._y_dot = np.zeros_like(r)
        y, y_dot = self._y, self._y_dot
        y_ddot = self.wn * self.wn * (r - y) - 2.0 * self.zeta * self.wn * y_dot
        self._y_dot = y_dot + self.dt * y_ddot
        self._y = y + self.dt * self._y_dot
        return y.copy(), y_dot.copy(), y_ddot

    def reset(self) -> None:
        self._y = None
        self._y_dot = None


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


# ---------------------------------------------------------------------------
# Controller
# ---------------------------------------------------------------------------

class SlidingModeController(FlightController):
    """Cascaded position/attitude sliding-mode controller with arm-disturbance feed-forward."""

    name = "FOFTSMC"

    def __init__(
        self,
        params: PlantParams,
        position: SurfaceParams,
        attitude: SurfaceParams,
        position_gains: ReachingGains,
        attitude_gains: ReachingGains,
        *,
        dt: float,
        memory_window: float = MEMORY_WINDOW,
        eps_position: float = DEFAULT_EPSILON,
        eps_attitude: float = DEFAULT_EPSILON,
        delta: float = DEFAULT_DELTA,
        equivalent_form: str = "derivative",
        attitude_limit: float = ATTITUDE_LIMIT,
        singularity_floor: float = SINGULARITY_FLOOR,
        filter_frequency: float = FILTER_FREQUENCY,
        filter_damping: float = FILTER_DAMPING,
    ) -> None:
        if equivalent_form not in EQUIVALENT_FORMS:
            raise ValueError(f"Unknown equivalent-control form {equivalent_form!r}")
        self.params = params
        self.position = position
        self.attitude = attitude
        self.position_gains = position_gains
        self.attitude_gains = attitude_gains
        self.dt = dt
        self.eps_position = eps_position
        self.eps_attitude = eps_attitude
        self.delta = delta
        self.equivalent_form = equivalent_form
        self.attitude_limit = attitude_limit
        self._pos_err: List[TrackingError] = [
            TrackingError(position, dt, memory_window, singularity_floor) for _ in range(3)
        ]
        self._att_err: List[TrackingError] = [
            TrackingError(attitude, dt, memory_window, singularity_floor) for _ in range(3)
        ]
        self._att_ref = CommandFilter(dt, filter_frequency, filter_damping)

    @classmethod
    def integer_order(cls, *args, **kwargs) -> "SlidingModeController":
        """Same controller with every fractional order set to one."""
        ctrl = cls(*args, **kwargs)
        ctrl.position = ctrl.position.integer_order()
        ctrl.attitude = ctrl.attitude.integer_order()
        for err in ctrl._pos_err:
            err.sp = ctrl.position
        for err in ctrl._att_err:
            err.sp = ctrl.attitude
        ctrl.name = "FTSMC"
        return ctrl

    def reset(self) -> None:
        for err in self._pos_err + self._att_err:
            err.reset()
        self._att_ref.reset()

    # -- loops ---------------------------------------------------------------

    def position_control(
        self,
        state: VehicleState,
        ref: ReferenceSample,
        d_est: DisturbanceWrench,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Commanded acceleration per inertial axis and the three surfaces."""
        m = self.params.mass.m_UAM
        u_p = np.zeros(3)
        S = np.zeros(3)
        for axis, err in enumerate(self._pos_err):
            err.update(state.p[axis] - ref.p[axis], state.v[axis] - ref.v[axis])
            S[axis] = fo_surface(err, self.position, self.delta)
            u_pc = equivalent_control(ref.a[axis], err, self.position, self.equivalent_form, self.delta)
            u_pr = reaching_control(S[axis], self.position_gains, d_est.F_cd[axis] / m, self.eps_position)
            u_p[axis] = u_pc + u_pr
        return u_p, S

    def attitude_control(
        self,
        state: VehicleState,
        att_ref: np.ndarray,
        att_ref_dot: np.ndarray,
        att_ref_ddot: np.ndarray,
        tau_cd_est: np.ndarray,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Body torque per axis and the three attitude surfaces."""
        I_b = self.params.I_b
        rates = euler_rate(state.phi, state.omega_b)
        tau = np.zeros(3)
        S = np.zeros(3)
        for axis, err in enumerate(self._att_err):
            e = state.phi[axis] - att_ref[axis]
            if axis == 2:
                e = _wrap(e)
            # Euler-angle rate error; the channel model acts on body rates, equal at level attitude.
            err.update(e, rates[axis] - att_ref_dot[axis])
            S[axis] = fo_surface(err, self.attitude, self.delta)
            ch = AttitudeChannelModel.from_plant(axis, state.omega_b, tau_cd_est, I_b)
            cmd = equivalent_control(att_ref_ddot[axis], err, self.attitude, self.equivalent_form, self.delta)
            cmd += reaching_control(S[axis], self.attitude_gains, 0.0, self.eps_attitude)
            tau[axis] = (ch.mu_a + cmd) / ch.lambda_a
        return tau, S

    def update(
        self,
        state: VehicleState,
        ref: ReferenceSample,
        d_est: DisturbanceWrench,
    ) -> ControlOutput:
        u_p, S_p = self.position_control(state, ref, d_est)
        F, phi_ref, theta_ref = thrust_attitude_inversion(
            u_p, ref.psi, self.params.mass, self.params.g, self.attitude_limit
        )
        att_ref, att_ref_dot, att_ref_ddot = self._att_ref.update(np.array([phi_ref, theta_ref, ref.psi]))
        tau, S_a = self.attitude_control(state, att_ref, att_ref_dot, att_ref_ddot, d_est.tau_cd)
        return ControlOutput(
            wrench=ControlWrench(F=F, tau_b=tau),
            u_p=u_p,
            att_ref=att_ref,
            surfaces=np.concatenate([S_p, S_a]),
        )


def ftsmc_baseline(*args, **kwargs) -> SlidingModeController:
    """Integer-order FTSMC sharing the FOFTSMC structural gains."""
    return SlidingModeController.integer_order(*args, **kwargs)
