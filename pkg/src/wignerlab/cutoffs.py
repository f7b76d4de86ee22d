"""C^2 ramps built from the quintic smoothstep ``s(t) = 10t^3 - 15t^4 + 6t^5``.

On a ramp of width ``w``: ``|f'| <= (15/8)/w`` and ``|f''| <= (10/sqrt(3))/w^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

D1_BOUND = 15 / 8
D2_BOUND = 10 / math.sqrt(3)


def smoothstep(t, nu: int = 0):
    """Quintic smoothstep (``nu = 0``) or its first/second derivative, clamped outside [0, 1]."""
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    tc = np.clip(t, 0.0, 1.0)
    if nu == 0:
        return tc**3 * (10 - 15 * tc + 6 * tc**2)
    if nu == 1:
        return np.where(inside, 30 * tc**2 * (1 - tc) ** 2, 0.0)
    if nu == 2:
        return np.where(inside, 60 * tc * (1 - tc) * (1 - 2 * tc), 0.0)
    raise ValueError("nu must be 0, 1 or 2")


@dataclass(frozen=True)
class SmoothedIndicator:
    """Equals 1 on ``[E1, E2]``, 0 outside ``[E1 - eta_d, E2 + eta_d]``, smoothstep ramps between."""

    E1: float
    E2: float
    eta_d: float

    def __post_init__(self):
        if self.E1 > self.E2:
            raise ValueError("E1 must not exceed E2")
        if self.eta_d <= 0:
            raise ValueError("eta_d must be positive")

    @property
    def C(self) -> float:
        return max(D1_BOUND, D2_BOUND)

    @property
    def support(self) -> tuple[float, float]:
        return self.E1 - self.eta_d, self.E2 + self.eta_d

    def __call__(self, x, nu: int = 0):
        x = np.asarray(x, dtype=float)
        w = self.eta_d
        up = (x - (self.E1 - w)) / w
        down = ((self.E2 + w) - x) / w
        scale = w ** (-nu)
        if nu == 0:
            return np.where(x < self.E1, smoothstep(up), np.where(x > self.E2, smoothstep(down), 1.0))
        sgn = (-1) ** nu
        return scale * np.where(x < self.E1, smoothstep(up, nu),
                                np.where(x > self.E2, sgn * smoothstep(down, nu), 0.0))


@dataclass(frozen=True)
class CutoffQ:
    """Bump equal to 1 within 1/3 of ``center`` and 0 beyond 2/3."""

    center: float

    def __call__(self, x, nu: int = 0):
        x = np.asarray(x, dtype=float)
        d = np.abs(x - self.center)
        t = (2 / 3 - d) * 3
        if nu == 0:
            return smoothstep(t)
        # d/dx of s(3(2/3 - |x - c|))
        return -3 * np.sign(x - self.center) * smoothstep(t, 1) if nu == 1 else 9 * smoothstep(t, 2)


def hs_chi(sigma, nu: int = 0):
    """Even cutoff in sigma: 1 for ``|sigma| <= 1/2``, 0 for ``|sigma| >= 1``."""
    sigma = np.asarray(sigma, dtype=float)
    t = (1 - np.abs(sigma)) * 2
    if nu == 0:
        return smoothstep(t)
    if nu == 1:
        return -2 * np.sign(sigma) * smoothstep(t, 1)
    raise ValueError("nu must be 0 or 1")
