"""Modified-DH kinematic chain of the arm, expressed in the UAV body frame."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

_SYMMETRY_TOL = 1e-12
_PSD_TOL = 1e-12


@dataclass(frozen=True)
class DHRow:
    """One modified-DH row: Rot_x(alpha_prev) Trans_x(a_prev) Rot_z(theta_offset + q) Trans_z(d)."""

    alpha_prev: float
    a_prev: float
    d: float
    theta_offset: float = 0.0

    def __post_init__(self) -> None:
        if not np.all(np.isfinite([self.alpha_prev, self.a_prev, self.d, self.theta_offset])):
            raise ValueError(f"DH parameters must be finite: {self}")


@dataclass(frozen=True)
class LinkInertial:
    mass: float
    com_local: np.ndarray
    inertia_local: np.ndarray

    def __post_init__(self) -> None:
        com = np.asarray(self.com_local, dtype=float).reshape(3)
        inertia = np.asarray(self.inertia_local, dtype=float).reshape(3, 3)
        object.__setattr__(self, "com_local", com)
        object.__setattr__(self, "inertia_local", inertia)
        # Zero mass is allowed so the arm can be switched off entirely.
        if not (np.isfinite(self.mass) and self.mass >= 0):
            raise ValueError(f"Link mass must be non-negative, got {self.mass!r}")
        if np.max(np.abs(inertia - inertia.T)) > _SYMMETRY_TOL:
            raise ValueError("Link inertia must be symmetric")
        moments = np.linalg.eigvalsh(inertia)
        if moments[0] < -_PSD_TOL:
            raise ValueError(f"Link inertia must be positive semidefinite, eigenvalues {moments}")
        if moments[0] + moments[1] < moments[2] - _PSD_TOL:
            raise ValueError(f"Principal moments {moments} violate the triangle inequality")


@dataclass(frozen=True)
class JointState:
    q: np.ndarray
    qd: np.ndarray
    qdd: np.ndarray

    def __post_init__(self) -> None:
        for name in ("q", "qd", "qdd"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"Joint {name} must be finite")
            object.__setattr__(self, name, arr)

    @classmethod
    def at_rest(cls, q: Sequence[float]) -> "JointState":
        q = np.asarray(q, dtype=float)
        return cls(q=q, qd=np.zeros_like(q), qdd=np.zeros_like(q))


@dataclass(frozen=True)
class LinkKinematics:
    """Frame, COM motion and geometric Jacobians of one link in the body frame."""

    frame_transform: np.ndarray
    com_pos: np.ndarray
    com_vel: np.ndarray
    ang_vel: np.ndarray
    jac_v: np.ndarray
    jac_w: np.ndarray

    @property
    def rotation(self) -> np.ndarray:
        return self.frame_transform[:3, :3]


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------

def link_transform(row: DHRow, q_i: float) -> np.ndarray:
    """Homogeneous transform from frame i-1 to frame i."""
    ca, sa = np.cos(row.alpha_prev), np.sin(row.alpha_prev)
    theta = row.theta_offset + q_i
    ct, st = np.cos(theta), np.sin(theta)
    return np.array([
        [ct, -st, 0.0, row.a_prev],
        [st * ca, ct * ca, -sa, -sa * row.d],
        [st * sa, ct * sa, ca, ca * row.d],
        [0.0, 0.0, 0.0, 1.0],
    ])


def forward_kinematics(
    chain: Sequence[DHRow],
    q: Sequence[float],
    mount: np.ndarray | None = None,
) -> List[np.ndarray]:
    """Return [B_T_0, B_T_1, ..., B_T_n] for joint angles *q*."""
    if len(q) != len(chain):
        raise ValueError(f"Expected {len(chain)} joint angles, got {len(q)}")
    T = np.eye(4) if mount is None else np.asarray(mount, dtype=float)
    frames = [T]
    for row, q_i in zip(chain, q):
        T = T @ link_transform(row, q_i)
        frames.append(T)
    return frames


def link_com_kinematics(
    chain: Sequence[DHRow],
    links: Sequence[LinkInertial],
    q: Sequence[float],
    qd: Sequence[float],
    mount: np.ndarray | None = None,
) -> List[LinkKinematics]:
    """COM positions, velocities and geometric Jacobians of every link.

    All joints are revolute about the z-axis of their own frame.  Column i of
    J_v for link j is z_i x (p_cj - o_i) for i <= j and zero otherwise.
    """
    if len(links) != len(chain):
        raise ValueError(f"Expected {len(chain)} links, got {len(links)}")
    qd = np.asarray(qd, dtype=float)
    frames = forward_kinematics(chain, q, mount)[1:]
    n = len(chain)
    axes = [T[:3, 2] for T in frames]
    origins = [T[:3, 3] for T in frames]

    out: List[LinkKinematics] = []
    for j, (T, link) in enumerate(zip(frames, links)):
        p_c = origins[j] + T[:3, :3] @ link.com_local
        jac_v = np.zeros((3, n))
        jac_w = np.zeros((3, n))
        for i in range(j + 1):
            jac_w[:, i] = axes[i]
            jac_v[:, i] = np.cross(axes[i], p_c - origins[i])
        out.append(LinkKinematics(
            frame_transform=T,
            com_pos=p_c,
            com_vel=jac_v @ qd,
            ang_vel=jac_w @ qd,
            jac_v=jac_v,
            jac_w=jac_w,
        ))
    return out


@dataclass(frozen=True)
class Manipulator:
    """Arm description: DH chain, link inertials and the body-to-base mount."""

    chain: tuple
    links: tuple
    mount: np.ndarray = field(default_factory=lambda: np.eye(4))

    def __post_init__(self) -> None:
        if len(self.chain) != len(self.links):
            raise ValueError("Chain and link lists must have equal length")
        object.__setattr__(self, "chain", tuple(self.chain))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "mount", np.asarray(self.mount, dtype=float).reshape(4, 4))

    @property
    def dof(self) -> int:
        return len(self.chain)

    @property
    def total_mass(self) -> float:
        return float(sum(link.mass for link in self.links))

    def kinematics(self, q: Sequence[float], qd: Sequence[float]) -> List[LinkKinematics]:
        return link_com_kinematics(self.chain, self.links, q, qd, self.mount)
