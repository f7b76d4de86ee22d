"""Closed-form invariant suite for the semicircle quantities and the Poisson kernel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .resolvent import theta_kernel
from .semicircle import classical_locations, m_sc, n_sc


@dataclass(frozen=True)
class Check:
    name: str
    value: float  # worst observed error
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.value < self.tol)


def z_grid() -> np.ndarray:
    """100 spectral parameters: 10 energies in [-3, 3] by 10 heights in [1e-6, 10]."""
    E, eta = np.meshgrid(np.linspace(-3, 3, 10), np.geomspace(1e-6, 10, 10))
    return (E + 1j * eta).ravel()


def fixed_point_residual() -> float:
    z = z_grid()
    m = m_sc(z)
    return float(np.abs(m + 1.0 / (z + m)).max())


def quantile_residual(N: int = 1000) -> float:
    gam = classical_locations(N)
    return float(np.abs(n_sc(gam) - np.arange(1, N + 1) / N).max())


def theta_mass_error(etas=(1e-3, 1e-1, 1.0)) -> float:
    worst = 0.0
    for eta in etas:
        left = quad(theta_kernel, -np.inf, 0, args=(eta,), epsabs=1e-14, epsrel=1e-14, limit=500)[0]
        right = quad(theta_kernel, 0, np.inf, args=(eta,), epsabs=1e-14, epsrel=1e-14, limit=500)[0]
        worst = max(worst, abs(left + right - 1.0))
    return worst


def run_selftest() -> list[Check]:
    return [
        Check("m_sc fixed point on 100-point grid", fixed_point_residual(), 1e-12),
        Check("n_sc(gamma_alpha) = alpha/N at N=1000", quantile_residual(1000), 1e-12),
        Check("theta_eta has unit mass", theta_mass_error(), 1e-12),
    ]
