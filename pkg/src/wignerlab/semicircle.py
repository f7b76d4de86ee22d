"""Semicircle law: density, distribution function, quantiles, Stieltjes transform."""
from __future__ import annotations

import csv

import numpy as np


def rho_sc(E):
    """Semicircle density ``sqrt((4 - E^2)_+) / (2 pi)``."""
    E = np.asarray(E, dtype=float)
    out = np.sqrt(np.clip(4.0 - E * E, 0.0, None)) / (2 * np.pi)
    return float(out) if out.ndim == 0 else out


def n_sc(E):
    """Integrated semicircle density ``int_{-inf}^E rho_sc``."""
    E = np.asarray(E, dtype=float)
    x = np.clip(E, -2.0, 2.0)
    out = 0.5 + x * np.sqrt(4.0 - x * x) / (4 * np.pi) + np.arcsin(x / 2) / np.pi
    out = np.where(E <= -2.0, 0.0, np.where(E >= 2.0, 1.0, out))
    return float(out) if out.ndim == 0 else out


def _quantiles(q: np.ndarray) -> np.ndarray:
    # bisection to bracket width 1e-14, then one guarded Newton step
    lo = np.full(q.shape, -2.0)
    hi = np.full(q.shape, 2.0)
    while True:
        width = (hi - lo).max()
        if width <= 1e-14:
            break
        mid = 0.5 * (lo + hi)
        below = n_sc(mid) < q
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    dens = rho_sc(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        step = (n_sc(x) - q) / dens
    newton = x - step
    ok = (dens > 0) & np.isfinite(newton) & (newton >= lo - 1e-14) & (newton <= hi + 1e-14)
    x = np.where(ok, newton, x)
    return np.where(q >= 1.0, 2.0, np.where(q <= 0.0, -2.0, x))


def classical_location(alpha: int, N: int) -> float:
    """Classical location ``gamma_alpha`` solving ``n_sc(gamma) = alpha / N`` (alpha is 1-based)."""
    if not 1 <= alpha <= N:
        raise ValueError(f"alpha must lie in [1, {N}], got {alpha}")
    return float(_quantiles(np.array([alpha / N]))[0])


def classical_locations(N: int) -> np.ndarray:
    """All classical locations ``gamma_1 < ... < gamma_N``."""
    return _quantiles(np.arange(1, N + 1) / N)


def m_sc(z):
    """Stieltjes transform of the semicircle law for ``Im z > 0``.

    Both roots of ``m^2 + z m + 1 = 0`` are formed; their product is 1
    and ``|m_sc| < 1``, so the answer is the reciprocal of the larger
    root (avoids cancellation), checked to have ``Im m > 0``.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("m_sc requires Im z > 0")
    s = np.sqrt(z * z - 4.0)
    r1 = (-z + s) / 2
    r2 = (-z - s) / 2
    big = np.where(np.abs(r1) >= np.abs(r2), r1, r2)
    out = 1.0 / big
    out = np.where(out.imag > 0, out, np.where(r1.imag > 0, r1, r2))
    return complex(out) if out.ndim == 0 else out


def write_locations_csv(path, N: int) -> None:
    """Write ``alpha, gamma`` rows for plotting."""
    gam = classical_locations(N)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "gamma"])
        for a, g in enumerate(gam, start=1):
            w.writerow([a, repr(float(g))])


def edge_scaling_constant(alpha: int, N: int) -> float:
    """``(gamma_alpha + 2) N^{2/3}``; tends to ``(3 pi alpha / 2)^{2/3}`` for fixed alpha."""
    return (classical_location(alpha, N) + 2.0) * N ** (2 / 3)


__all__ = [
    "rho_sc",
    "n_sc",
    "classical_location",
    "classical_locations",
    "m_sc",
    "write_locations_csv",
    "edge_scaling_constant",
]
