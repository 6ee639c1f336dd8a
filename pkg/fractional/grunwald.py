"""Grünwald–Letnikov fractional derivative/integral over uniformly sampled histories.

FractionalOrder   -- validated operator order (alpha > 0 derivative, alpha < 0 integral)
SampleHistory     -- short-memory ring buffer of samples on a uniform grid
gl_weights        -- binomial weights w[k] = w[k-1] * (1 - (alpha + 1) / k)
frac_derivative   -- dt^-alpha * sum_k w[k] * f[n-k] over the retained window
frac_integral     -- frac_derivative with order -gamma
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

MAX_ABS_ORDER = 2.0


class FractionalOrderError(ValueError):
    """Raised when an operator order or history parameter is out of range."""


class EmptyHistoryError(RuntimeError):
    """Raised when a fractional operator is applied to an empty history."""


@dataclass(frozen=True)
class FractionalOrder:
    alpha: float

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not math.isfinite(alpha):
            raise FractionalOrderError(f"Fractional order must be finite, got {alpha!r}")
        if abs(alpha) >= MAX_ABS_ORDER:
            raise FractionalOrderError(f"|alpha| must be < {MAX_ABS_ORDER}, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GLWeights:
    alpha: float
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.w)


def _recurrence(alpha: float, n: int) -> np.ndarray:
    k = np.arange(1, n, dtype=float)
    factors = np.empty(n, dtype=float)
    factors[0] = 1.0
    factors[1:] = 1.0 - (alpha + 1.0) / k
    return np.cumprod(factors)


@lru_cache(maxsize=128)
def _reversed_weights(alpha: float, n: int) -> np.ndarray:
    # Oldest-first layout so the newest n samples pair with the tail slice.
    w = _recurrence(alpha, n)[::-1].copy()
    w.setflags(write=False)
    return w


def gl_weights(alpha: float, n: int) -> GLWeights:
    """Return the first *n* Grünwald–Letnikov weights for order *alpha*."""
    alpha = FractionalOrder(alpha).alpha
    if n < 1:
        raise FractionalOrderError(f"Weight count must be >= 1, got {n}")
    w = _recurrence(alpha, int(n))
    w.setflags(write=False)
    return GLWeights(alpha=alpha, w=w)


# ---------------------------------------------------------------------------
# SampleHistory
# ---------------------------------------------------------------------------

class SampleHistory:
    """Bounded history of finite samples on a uniform grid, newest last.

    Samples are written twice into a buffer of length ``2 * capacity`` so the
    retained window is always one contiguous slice.
    """

    def __init__(self, dt: float, capacity: int, samples: Iterable[float] = ()) -> None:
        if not (math.isfinite(dt) and dt > 0):
            raise FractionalOrderError(f"History step must be positive, got {dt!r}")
        if capacity < 1:
            raise FractionalOrderError(f"History capacity must be >= 1, got {capacity!r}")
        self.dt = float(dt)
        self.capacity = int(capacity)
        self._buf = np.zeros(2 * self.capacity, dtype=float)
        self._pos = -1
        self._count = 0
        for value in samples:
            self.append(value)

    @classmethod
    def for_window(cls, dt: float, window_seconds: float) -> "SampleHistory":
        """History whose capacity covers *window_seconds* of samples."""
        return cls(dt, max(1, int(round(window_seconds / dt))))

    def __len__(self) -> int:
        return min(self._count, self.capacity)

    def append(self, value: float) -> None:
        value = float(value)
        if not math.isfinite(value):
            raise FractionalOrderError(f"History samples must be finite, got {value!r}")
        self._pos = (self._pos + 1) % self.capacity
        self._buf[self._pos] = value
        self._buf[self._pos + self.capacity] = value
        self._count += 1

    def values(self) -> np.ndarray:
        """Read-only view of the retained window, oldest first."""
        n = len(self)
        end = self._pos + self.capacity + 1
        view = self._buf[end - n:end]
        view.flags.writeable = False
        return view

    @property
    def newest(self) -> float:
        if not self._count:
            raise EmptyHistoryError("History is empty")
        return float(self._buf[self._pos])

    def clear(self) -> None:
        self._pos = -1
        self._count = 0


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def frac_derivative(h: SampleHistory, alpha: float) -> float:
    """Grünwald–Letnikov derivative of order *alpha* at the newest sample.

    Negative *alpha* yields the fractional integral.  The sum runs over the
    retained window only; samples before the first one are taken as zero.
    """
    alpha = FractionalOrder(alpha).alpha
    n = len(h)
    if n == 0:
        raise EmptyHistoryError("Fractional operator applied to an empty history")
    w = _reversed_weights(alpha, h.capacity)[h.capacity - n:]
    total = float((w * h.values()).sum())
    return total / h.dt ** alpha


def frac_integral(h: SampleHistory, gamma: float) -> float:
    """Grünwald–Letnikov integral of order *gamma* in (0, 2)."""
    gamma = float(gamma)
    if not (0.0 < gamma < MAX_ABS_ORDER):
        raise FractionalOrderError(f"Integral order must lie in (0, 2), got {gamma!r}")
    return frac_derivative(h, -gamma)
