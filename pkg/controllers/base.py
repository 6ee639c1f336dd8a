"""Abstract base class for flight controllers."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from plant.dynamics import ControlWrench, DisturbanceWrench, VehicleState
from scenarios.trajectories import ReferenceSample


@dataclass(frozen=True)
class ControlOutput:
    wrench: ControlWrench
    u_p: np.ndarray
    att_ref: np.ndarray
    surfaces: np.ndarray


class FlightController(ABC):
    name: str = ""

    @abstractmethod
    def update(
        self,
        state: VehicleState,
        ref: ReferenceSample,
        d_est: DisturbanceWrench,
    ) -> ControlOutput:
        """Advance one control step and return the commanded wrench."""
        ...

    @abstractmethod
    def reset(self) -> None:
        """Clear histories and integrator states."""
        ...
