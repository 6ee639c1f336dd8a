"""Closed-loop run log: one row per control step on a uniform time grid."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

_XYZ = ("x", "y", "z")
_EULER = ("phi", "theta", "psi")

LOG_COLUMNS: List[str] = (
    ["t"]
    + list(_XYZ)
    + list(_EULER)
    + [f"{c}_ref" for c in _XYZ + _EULER]
    + [f"S_{c}" for c in _XYZ + _EULER]
    + [f"u_{c}" for c in _XYZ]
    + ["F"]
    + [f"tau_{c}" for c in _XYZ]
    + [f"Fcd_{c}" for c in _XYZ]
    + [f"taucd_{c}" for c in _XYZ]
    + [f"q{i}" for i in range(1, 5)]
    + ["V_out", "V_in"]
)

STATUS_COMPLETED = "completed"
STATUS_DIVERGED = "diverged"


@dataclass
class RunLog:
    controller: str
    dt: float
    data: np.ndarray = field(default_factory=lambda: np.zeros((0, len(LOG_COLUMNS))))
    columns: Sequence[str] = field(default_factory=lambda: list(LOG_COLUMNS))
    status: str = STATUS_COMPLETED
    diagnostic: str = ""

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))
        self._index: Dict[str, int] = {name: i for i, name in enumerate(self.columns)}

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def diverged(self) -> bool:
        return self.status == STATUS_DIVERGED

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    def column(self, name: str) -> np.ndarray:
        try:
            return self.data[:, self._index[name]]
        except KeyError:
            raise KeyError(f"Unknown log column {name!r}") from None

    def block(self, *names: str) -> np.ndarray:
        return self.data[:, [self._index[n] for n in names]]

    @property
    def surfaces(self) -> np.ndarray:
        return self.block(*[f"S_{c}" for c in _XYZ + _EULER])


def log_row(
    t: float,
    p: np.ndarray,
    phi: np.ndarray,
    p_ref: np.ndarray,
    phi_ref: np.ndarray,
    surfaces: np.ndarray,
    u_p: np.ndarray,
    F: float,
    tau: np.ndarray,
    F_cd: np.ndarray,
    tau_cd: np.ndarray,
    q: np.ndarray,
) -> np.ndarray:
    S = np.asarray(surfaces, dtype=float)
    V_out = 0.5 * float(S[:3] @ S[:3])
    V_in = 0.5 * float(S[3:] @ S[3:])
    return np.concatenate([
        [t], p, phi, p_ref, phi_ref, S, u_p, [F], tau, F_cd, tau_cd, q, [V_out, V_in],
    ])
