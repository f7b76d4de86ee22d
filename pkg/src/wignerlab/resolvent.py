"""Green function analytics on a computed spectrum.

``G(z) = (H - z)^{-1}`` is evaluated by spectral sums over a
:class:`~wignerlab.spectral.SpectralData`.  Entries are the true matrix
entries, so ``G[:, j]`` solves ``(H - z) x = e_j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import adaptive_simpson
from .semicircle import m_sc
from .spectral import SpectralData, count_eigenvalues


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0:
        raise ValueError("the spectral parameter must have nonzero imaginary part")
    return z


def green_matrix(spec: SpectralData, z: complex) -> np.ndarray:
    z = _check_z(z)
    U = spec.vectors
    return (U / (spec.eigenvalues - z)[None, :]) @ U.conj().T


def green_entry(spec: SpectralData, z: complex, i: int, j: int) -> complex:
    z = _check_z(z)
    U = spec.vectors
    return complex(np.sum(U[i, :] * np.conj(U[j, :]) / (spec.eigenvalues - z)))


def green_diagonal(spec: SpectralData, z: complex) -> np.ndarray:
    z = _check_z(z)
    return (np.abs(spec.vectors) ** 2) @ (1.0 / (spec.eigenvalues - z))


def stieltjes(spec: SpectralData, z) -> complex | np.ndarray:
    """``m(z) = (1/N) sum_alpha 1 / (lambda_alpha - z)``; vectorized over ``z``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        raise ValueError("the spectral parameter must have nonzero imaginary part")
    out = np.mean(1.0 / (spec.eigenvalues[None, :] - z.reshape(-1, 1)), axis=1).reshape(z.shape)
    return complex(out) if out.ndim == 0 else out


def tilde_green(spec: SpectralData, z: complex, i: int, j: int) -> complex:
    """``(G_ij(z) - G_ij(conj z)) / 2i = sum_b eta u_b(i) conj(u_b(j)) / ((E - lambda_b)^2 + eta^2)``."""
    z = _check_z(z)
    if z.imag <= 0:
        raise ValueError("tilde_green requires Im z > 0")
    U = spec.vectors
    ker = z.imag / ((z.real - spec.eigenvalues) ** 2 + z.imag**2)
    return complex(np.sum(U[i, :] * np.conj(U[j, :]) * ker))


def tilde_green_line(spec: SpectralData, E, eta: float, i: int, j: int) -> np.ndarray:
    """``tilde_green`` along a horizontal line, vectorized over ``E``."""
    E = np.asarray(E, dtype=float)
    w = spec.vectors[i, :] * np.conj(spec.vectors[j, :])
    ker = eta / ((E[:, None] - spec.eigenvalues[None, :]) ** 2 + eta * eta)
    out = ker @ w
    return out if np.iscomplexobj(out) else out.astype(float)


@dataclass(frozen=True)
class ControlParams:
    Lambda_d: float
    Lambda_o: float
    Lambda: float
    z: complex


def control_params(spec: SpectralData, z: complex) -> ControlParams:
    """Diagonal, off-diagonal and averaged deviations of ``G`` from ``m_sc``."""
    z = _check_z(z)
    msc = m_sc(z)
    G = green_matrix(spec, z)
    diag = np.diagonal(G)
    lam_d = float(np.abs(diag - msc).max())
    off = np.abs(G)
    np.fill_diagonal(off, 0.0)
    lam_o = float(off.max()) if spec.N > 1 else 0.0
    lam = float(abs(diag.mean() - msc))
    return ControlParams(lam_d, lam_o, lam, z)


def theta_kernel(x, eta: float):
    """Poisson kernel ``eta / (pi (x^2 + eta^2))``."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    x = np.asarray(x, dtype=float)
    out = eta / (np.pi * (x * x + eta * eta))
    return float(out) if out.ndim == 0 else out


def theta_kernel_mass(a: float, b: float, eta: float) -> float:
    """``int_a^b theta_eta`` from the arctan antiderivative."""
    return (math.atan(b / eta) - math.atan(a / eta)) / math.pi


def smoothed_count(spec: SpectralData, E1, E2, eta: float):
    """``tr (1_[E1,E2] * theta_eta)(H)`` in arctan closed form (vectorized over ``E2``)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    E2 = np.asarray(E2, dtype=float)
    E1 = np.asarray(E1, dtype=float)
    if np.any(E1 > E2):
        raise ValueError("E1 must not exceed E2")
    lam = spec.eigenvalues
    hi = np.arctan((E2[..., None] - lam) / eta)
    lo = np.arctan((E1[..., None] - lam) / eta)
    out = (hi - lo).sum(axis=-1) / np.pi
    return float(out) if out.ndim == 0 else out


def smoothed_count_quadrature(spec: SpectralData, E1: float, E2: float, eta: float,
                              abs_tol: float = 1e-9) -> float:
    """Oracle for :func:`smoothed_count`: ``(N/pi) int_{E1}^{E2} Im m(y + i eta) dy`` by adaptive Simpson."""
    N = spec.N

    def f(y):
        return N / np.pi * stieltjes(spec, y + 1j * eta).imag

    res = adaptive_simpson(f, E1, E2, abs_tol=abs_tol, max_step=eta / 2)
    return float(res.value)


# ---------------------------------------------------------------------------
# counting lemmas near the lower edge


def E_L(N: int, log_power: float = 2.0) -> float:
    """Left anchor ``-2 - 2 (log N)^L N^{-2/3}`` of the counting intervals."""
    return -2.0 - 2.0 * math.log(N) ** log_power * N ** (-2 / 3)


def edge_window(N: int, log_power: float = 2.0) -> tuple[float, float]:
    """Energies with ``|E + 2| N^{2/3} <= (3/2) (log N)^L``."""
    half = 1.5 * math.log(N) ** log_power * N ** (-2 / 3)
    return -2.0 - half, -2.0 + half


@dataclass(frozen=True)
class SandwichReport:
    E: float
    lower: float
    sharp: int
    upper: float
    holds: bool
    ell: float
    eta: float


def count_sandwich(spec: SpectralData, E: float, eps: float, log_power: float = 2.0) -> SandwichReport:
    """Bracket ``#{lambda <= E}`` by smoothed counts on windows shifted by ``+-ell``.

    ``ell = N^{-2/3-eps}/2`` and ``eta = N^{-2/3-9 eps}``; the smoothed
    counts are taken over ``[E_L, E -+ ell]`` and widened by ``N^{-eps}``.
    """
    N = spec.N
    ell = 0.5 * N ** (-2 / 3 - eps)
    eta = N ** (-2 / 3 - 9 * eps)
    left = E_L(N, log_power)
    lower = smoothed_count(spec, left, E - ell, eta) - N ** (-eps)
    upper = smoothed_count(spec, left, E + ell, eta) + N ** (-eps)
    sharp = int(np.searchsorted(spec.eigenvalues, E, side="right"))
    return SandwichReport(E, lower, sharp, upper, bool(lower <= sharp <= upper), ell, eta)


@dataclass(frozen=True)
class GapReport:
    E: float
    lhs: float
    rhs: float
    local_count: int
    holds: bool


def sharp_vs_smooth_gap(spec: SpectralData, E: float, eps: float, C: float = 10.0,
                        log_power: float = 2.0) -> GapReport:
    """Compare ``|tr chi_E(H) - tr (chi_E * theta_eta)(H)|`` with ``C (N^{-2 eps} + local count)``.

    ``chi_E`` is the indicator of ``[E_L, E]``, ``ell_1 = N^{-2/3-3 eps}``,
    ``eta = N^{-2/3-9 eps}``.
    """
    N = spec.N
    ell1 = N ** (-2 / 3 - 3 * eps)
    eta = N ** (-2 / 3 - 9 * eps)
    left = E_L(N, log_power)
    sharp = count_eigenvalues(spec, left, E)
    lhs = abs(sharp - smoothed_count(spec, left, E, eta))
    local = count_eigenvalues(spec, E - ell1, E + ell1)
    rhs = C * (N ** (-2 * eps) + local)
    return GapReport(E, float(lhs), float(rhs), local, bool(lhs <= rhs))


# ---------------------------------------------------------------------------
# audits


def default_audit_grid(N: int) -> list[tuple[float, float]]:
    """Twenty (E, eta) points: edge, bulk and outside energies; eta from 1 down to 0.5/N."""
    return [(E, eta) for E in (-2.0, -1.0, 0.0, 1.5, 2.0) for eta in (1.0, 0.1, 20.0 / N, 0.5 / N)]


@dataclass
class LocalLawAudit:
    N: int
    log_power: float
    grid: list
    average_ratio: np.ndarray  # Lambda * N eta / (log N)^p
    entry_ratio: np.ndarray  # (Lambda_d + Lambda_o) / bound
    norm_ratio: float  # (||H|| - 2) / (N^{-2/3} (log N)^p)
    params: dict = field(default_factory=dict)

    @property
    def average_ok(self) -> bool:
        return bool(np.all(self.average_ratio <= 1.0))

    @property
    def entry_ok(self) -> bool:
        return bool(np.all(self.entry_ratio <= 1.0))

    @property
    def norm_ok(self) -> bool:
        return self.norm_ratio <= 1.0

    @property
    def ok(self) -> bool:
        return self.average_ok and self.entry_ok and self.norm_ok

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "log_power": self.log_power,
            "grid": [[float(E), float(eta)] for E, eta in self.grid],
            "average_ratio": [float(r) for r in self.average_ratio],
            "entry_ratio": [float(r) for r in self.entry_ratio],
            "norm_ratio": float(self.norm_ratio),
            "average_ok": self.average_ok,
            "entry_ok": self.entry_ok,
            "norm_ok": self.norm_ok,
        }


def local_law_audit(spec: SpectralData, grid=None, log_power: float = 2.0) -> LocalLawAudit:
    """Ratios of the observed resolvent deviations to the local-law bounds.

    With ``phi = (log N)^p``: the averaged bound is ``phi / (N eta)``;
    the entrywise bound is ``phi (sqrt(Im m_sc / (N eta)) + 1/(N eta))``,
    used for every eta including those below 1/N; the norm bound is
    ``2 + N^{-2/3} phi``.  Ratios above 1 are violations.
    """
    N = spec.N
    grid = list(grid if grid is not None else default_audit_grid(N))
    for E, eta in grid:
        if abs(E) > 5 or not 0 < eta <= 10:
            raise ValueError(f"grid point ({E}, {eta}) outside |E| <= 5, 0 < eta <= 10")
    phi = math.log(N) ** log_power
    avg = np.empty(len(grid))
    ent = np.empty(len(grid))
    for k, (E, eta) in enumerate(grid):
        z = complex(E, eta)
        cp = control_params(spec, z)
        Neta = N * eta
        avg[k] = cp.Lambda * Neta / phi
        bound = phi * (math.sqrt(m_sc(z).imag / Neta) + 1.0 / Neta)
        ent[k] = (cp.Lambda_d + cp.Lambda_o) / bound
    norm = float(np.abs(spec.eigenvalues).max())
    norm_ratio = (norm - 2.0) / (N ** (-2 / 3) * phi)
    return LocalLawAudit(N, log_power, grid, avg, ent, norm_ratio)
