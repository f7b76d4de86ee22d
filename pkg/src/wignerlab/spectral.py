"""Dense eigendecomposition and direct spectral observables.

Eigenvalue labels ``alpha`` are 1-based ranks (``alpha = 1`` is the
smallest eigenvalue); vector component indices ``i, j`` are 0-based.
"""
from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass

import numpy as np

from .semicircle import classical_locations

DEGENERATE_GAP = 1e-10


class EigenDecompositionError(RuntimeError):
    """The eigensolver residual exceeded its bound."""


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Ordered eigenvalues and phase-fixed eigenvectors (column ``alpha - 1``)."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    symmetry: str
    residual: float = 0.0

    @property
    def N(self) -> int:
        return self.eigenvalues.size

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.vectors)

    def vector(self, alpha: int) -> np.ndarray:
        _check_alpha(alpha, self.N)
        return self.vectors[:, alpha - 1]

    def unreliable(self) -> np.ndarray:
        """Mask of eigenvectors whose adjacent gap is below ``DEGENERATE_GAP``."""
        gaps = np.diff(self.eigenvalues)
        bad = np.zeros(self.N, dtype=bool)
        bad[:-1] |= gaps < DEGENERATE_GAP
        bad[1:] |= gaps < DEGENERATE_GAP
        return bad


def _check_alpha(alpha: int, N: int) -> None:
    if not 1 <= alpha <= N:
        raise IndexError(f"eigenvalue label {alpha} outside [1, {N}]")


def fix_phases(U: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus component is real and positive."""
    U = np.array(U, copy=True)
    idx = np.argmax(np.abs(U), axis=0)
    pivots = U[idx, np.arange(U.shape[1])]
    phase = pivots / np.abs(pivots)
    U /= phase[None, :]
    U[idx, np.arange(U.shape[1])] = np.abs(pivots)
    return U


def eigendecompose(H: np.ndarray, symmetry: str | None = None, check: bool = True) -> SpectralData:
    """Full Hermitian eigendecomposition via LAPACK ``*heevd``/``*syevd``.

    Raises :class:`EigenDecompositionError` if ``max ||H u - lambda u||``
    exceeds ``1e-8 ||H||``.
    """
    H = np.asarray(H)
    lam, U = np.linalg.eigh(H)
    U = fix_phases(U)
    if symmetry is None:
        symmetry = "complex_hermitian" if np.iscomplexobj(H) else "real_symmetric"
    resid = 0.0
    if check:
        scale = max(np.abs(lam).max(), 1e-300)
        resid = float(np.linalg.norm(H @ U - U * lam[None, :], axis=0).max())
        if resid > 1e-8 * scale and resid > 1e-12:
            raise EigenDecompositionError(f"residual {resid:.3g} exceeds 1e-8 * ||H|| = {1e-8 * scale:.3g}")
    lam.setflags(write=False)
    U.setflags(write=False)
    return SpectralData(lam, U, symmetry, resid)


def count_eigenvalues(spec: SpectralData, E1: float, E2: float) -> int:
    """Number of eigenvalues in the closed interval ``[E1, E2]``."""
    if E1 > E2:
        raise ValueError("E1 must not exceed E2")
    lam = spec.eigenvalues
    return int(np.searchsorted(lam, E2, side="right") - np.searchsorted(lam, E1, side="left"))


@dataclass(frozen=True)
class RigidityProfile:
    deviation: np.ndarray  # |lambda_alpha - gamma_alpha|
    normalizer: np.ndarray  # min(alpha, N - alpha + 1)^(-1/3) N^(-2/3)
    log_power: float

    @property
    def ratio(self) -> np.ndarray:
        N = self.deviation.size
        return self.deviation / (math.log(N) ** self.log_power * self.normalizer)

    @property
    def worst_ratio(self) -> float:
        return float(self.ratio.max())


def rigidity_profile(spec: SpectralData, log_power: float = 2.0) -> RigidityProfile:
    N = spec.N
    alpha = np.arange(1, N + 1)
    dev = np.abs(spec.eigenvalues - classical_locations(N))
    norm = np.minimum(alpha, N - alpha + 1) ** (-1 / 3) * N ** (-2 / 3)
    return RigidityProfile(dev, norm, log_power)


def delocalization_stat(spec: SpectralData) -> float:
    """``N max_{alpha, i} |u_alpha(i)|^2``: 1 for flat vectors, N for basis vectors."""
    return float(spec.N * (np.abs(spec.vectors) ** 2).max())


def eigenvector_overlap(spec: SpectralData, alpha: int, i: int, j: int) -> complex:
    """``N conj(u_alpha(i)) u_alpha(j)``; independent of the eigenvector's global phase."""
    N = spec.N
    _check_alpha(alpha, N)
    if not (0 <= i < N and 0 <= j < N):
        raise IndexError(f"component indices ({i}, {j}) outside [0, {N})")
    u = spec.vectors[:, alpha - 1]
    return complex(N * np.conj(u[i]) * u[j])


def scaled_eigenvalue(spec: SpectralData, beta: int, region: str = "edge") -> float:
    """``N^{2/3}(lambda_beta - gamma_beta)`` at the edge, ``N(lambda_beta - gamma_beta)`` in the bulk."""
    N = spec.N
    _check_alpha(beta, N)
    from .semicircle import classical_location

    d = spec.eigenvalues[beta - 1] - classical_location(beta, N)
    if region == "edge":
        return float(N ** (2 / 3) * d)
    if region == "bulk":
        return float(N * d)
    raise ValueError(f"region must be 'edge' or 'bulk', got {region!r}")


def min_gap(spec: SpectralData, E1: float, E2: float) -> float:
    """Smallest spacing between consecutive eigenvalues inside ``[E1, E2]`` (inf if fewer than two)."""
    if E1 > E2:
        raise ValueError("E1 must not exceed E2")
    lam = spec.eigenvalues
    lo = bisect.bisect_left(lam, E1)
    hi = bisect.bisect_right(lam, E2)
    inside = lam[lo:hi]
    if inside.size < 2:
        return math.inf
    return float(np.diff(inside).min())


def write_spectrum_csv(path, spec: SpectralData) -> None:
    """Columns ``alpha, lambda, gamma, deviation`` in shortest round-trip decimal."""
    gam = classical_locations(spec.N)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "lambda", "gamma", "deviation"])
        for a, (lam, g) in enumerate(zip(spec.eigenvalues, gam), start=1):
            w.writerow([a, repr(float(lam)), repr(float(g)), repr(float(lam - g))])
