"""Cascaded PID baseline: position -> velocity loop, attitude -> rate loop."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from controllers.allocation import ATTITUDE_LIMIT, thrust_attitude_inversion
from controllers.base import ControlOutput, FlightController
from plant.dynamics import ControlWrench, DisturbanceWrench, PlantParams, VehicleState


class PIDChannel:
    """Single-axis PID with clamped output and conditional-integration anti-windup.

    While the output is saturated the integral state is frozen.  The derivative
    acts on the error and is zero on the first update.
    """

    def __init__(
        self,
        kp: float,
        ki: float = 0.0,
        kd: float = 0.0,
        integral_limit: float = float("inf"),
        output_limit: float = float("inf"),
    ) -> None:
        if min(kp, ki, kd) < 0:
            raise ValueError("PID gains must be non-negative")
        if not (integral_limit > 0 and output_limit > 0):
            raise ValueError("PID limits must be positive")
        self.kp = kp
        self.ki = ki
        self.kd = kd
        self.integral_limit = integral_limit
        self.output_limit = output_limit
        self.integral = 0.0
        self.saturated = False
        self._prev_error: float | None = None

    def update(self, error: float, dt: float) -> float:
        derivative = 0.0 if self._prev_error is None else (error - self._prev_error) / dt
        self._prev_error = error
        if not self.saturated:
            self.integral = float(np.clip(self.integral + error * dt, -self.integral_limit, self.integral_limit))
        raw = self.kp * error + self.ki * self.integral + self.kd * derivative
        out = float(np.clip(raw, -self.output_limit, self.output_limit))
        self.saturated = out != raw
        return out

    def reset(self) -> None:
        self.integral = 0.0
        self.saturated = False
        self._prev_error = None


def _triple(values: Sequence[float]) -> Tuple[float, float, float]:
    arr = np.broadcast_to(np.asarray(values, dtype=float), (3,))
    return float(arr[0]), float(arr[1]), float(arr[2])


@dataclass
class PIDGains:
    position_kp: List[float] = field(default_factory=lambda: [4.5, 4.5, 4.0])
    velocity_kp: List[float] = field(default_factory=lambda: [2.0, 2.0, 4.5])
    velocity_ki: List[float] = field(default_factory=lambda: [0.03, 0.03, 0.03])
    velocity_kd: List[float] = field(default_factory=lambda: [1.0, 1.0, 1.0])
    attitude_kp: List[float] = field(default_factory=lambda: [4.5, 4.5, 4.0])
    rate_kp: List[float] = field(default_factory=lambda: [1.0, 1.0, 2.0])
    rate_ki: List[float] = field(default_factory=lambda: [0.3, 0.3, 0.3])
    rate_kd: List[float] = field(default_factory=lambda: [0.03, 0.03, 0.03])
    accel_limit: float = 6.0
    torque_limit: float = 2.0
    integral_limit: float = 1.0
    velocity_limit: float = 3.0
    rate_limit: float = 3.0


@dataclass
class _Cascade:
    outer: List[PIDChannel] = field(default_factory=list)
    inner: List[PIDChannel] = field(default_factory=list)

    def reset(self) -> None:
        for ch in self.outer + self.inner:
            ch.reset()


class CascadePID(FlightController):
    """PID baseline without disturbance feed-forward.

    The velocity loop output is a commanded acceleration, inverted to thrust
    and attitude references in the same way as the sliding-mode controllers.
    """

    name = "PID"

    def __init__(
        self,
        params: PlantParams,
        gains: PIDGains | None = None,
        *,
        dt: float,
        attitude_limit: float = ATTITUDE_LIMIT,
    ) -> None:
        self.params = params
        self.gains = g = gains or PIDGains()
        self.dt = dt
        self.attitude_limit = attitude_limit
        self._translation = _Cascade(
            outer=[PIDChannel(kp, output_limit=g.velocity_limit) for kp in _triple(g.position_kp)],
            inner=[
                PIDChannel(kp, ki, kd, g.integral_limit, g.accel_limit)
                for kp, ki, kd in zip(_triple(g.velocity_kp), _triple(g.velocity_ki), _triple(g.velocity_kd))
            ],
        )
        self._rotation = _Cascade(
            outer=[PIDChannel(kp, output_limit=g.rate_limit) for kp in _triple(g.attitude_kp)],
            inner=[
                PIDChannel(kp, ki, kd, g.integral_limit, g.torque_limit)
                for kp, ki, kd in zip(_triple(g.rate_kp), _triple(g.rate_ki), _triple(g.rate_kd))
            ],
        )

    def reset(self) -> None:
        self._translation.reset()
        self._rotation.reset()

    def update(self, state: VehicleState, ref, d_est: DisturbanceWrench) -> ControlOutput:
        dt = self.dt
        u_p = np.zeros(3)
        for axis in range(3):
            v_cmd = ref.v[axis] + self._translation.outer[axis].update(ref.p[axis] - state.p[axis], dt)
            u_p[axis] = ref.a[axis] + self._translation.inner[axis].update(v_cmd - state.v[axis], dt)

        F, phi_ref, theta_ref = thrust_attitude_inversion(
            u_p, ref.psi, self.params.mass, self.params.g, self.attitude_limit
        )
        att_ref = np.array([phi_ref, theta_ref, ref.psi])

        tau = np.zeros(3)
        for axis in range(3):
            e = att_ref[axis] - state.phi[axis]
            if axis == 2:
                e = (e + np.pi) % (2.0 * np.pi) - np.pi
            rate_cmd = self._rotation.outer[axis].update(e, dt)
            tau[axis] = self._rotation.inner[axis].update(rate_cmd - state.omega_b[axis], dt)

        # PID has no sliding surface; zeros keep the log schema uniform.
        return ControlOutput(
            wrench=ControlWrench(F=F, tau_b=tau),
            u_p=u_p,
            att_ref=att_ref,
            surfaces=np.zeros(6),
        )
