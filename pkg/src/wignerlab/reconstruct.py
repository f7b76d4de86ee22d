"""Eigenvector overlaps recovered from integrals of the resolvent.

For an isolated eigenvalue ``lambda_alpha`` and ``eta`` far below the
local spacing,

    N conj(u_alpha(i)) u_alpha(j)
        ~ (N / pi) int_I tilde_G_ji(E + i eta) 1{lambda_{alpha-1} <= E - phi eta <= lambda_alpha} dE

with ``phi = (log N)^{c1_power}`` and ``I`` a window around the edge
``-2`` of width ``N^{-2/3} (log N)^{c2_power}`` (or around
``gamma_alpha`` with width ``N^{-1} (log N)^{c2_power}`` in the bulk).
The smoothed variant replaces the indicator by
``q(smoothed eigenvalue count below E - phi eta)``, a function of the
resolvent alone.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoffs import CutoffQ
from .quadrature import adaptive_simpson
from .resolvent import E_L, smoothed_count, tilde_green_line
from .semicircle import classical_location
from .spectral import SpectralData

DEFAULT_EPS = 1.0
DEFAULT_C1 = 2.0
DEFAULT_C2 = 1.0


@dataclass(frozen=True)
class Reconstruction:
    value: complex
    quality: bool  # both neighbouring gaps exceed 2 phi eta
    in_window: bool  # lambda_alpha lies in the integration window
    eta: float
    window: tuple
    quad_error: float
    converged: bool


def _setup(spec: SpectralData, alpha: int, eps: float, c1_power: float, c2_power: float, region: str):
    N = spec.N
    if not 1 <= alpha <= N:
        raise IndexError(f"alpha={alpha} outside [1, {N}]")
    logN = math.log(N)
    if region == "edge":
        eta = N ** (-2 / 3 - eps)
        half = N ** (-2 / 3) * logN**c2_power
        window = (-2.0 - half, -2.0 + half)
    elif region == "bulk":
        eta = N ** (-1 - eps)
        half = logN**c2_power / N
        g = classical_location(alpha, N)
        window = (g - half, g + half)
    else:
        raise ValueError(f"region must be 'edge' or 'bulk', got {region!r}")
    shift = logN**c1_power * eta
    lam = spec.eigenvalues
    below = lam[alpha - 2] if alpha > 1 else -math.inf
    above = lam[alpha] if alpha < N else math.inf
    quality = (lam[alpha - 1] - below > 2 * shift) and (above - lam[alpha - 1] > 2 * shift)
    in_window = window[0] <= lam[alpha - 1] <= window[1]
    return eta, shift, window, below, bool(quality), bool(in_window)


def reconstruct_overlap(spec: SpectralData, alpha: int, i: int, j: int, eps: float = DEFAULT_EPS,
                        c1_power: float = DEFAULT_C1, c2_power: float = DEFAULT_C2,
                        region: str = "edge") -> Reconstruction:
    """Sharp-indicator reconstruction of ``N conj(u_alpha(i)) u_alpha(j)``.

    The indicator restricts ``E`` to ``[lambda_{alpha-1} + phi eta,
    lambda_alpha + phi eta]`` (``lambda_0 = -inf``) intersected with the
    window; that interval is integrated by adaptive Simpson with step
    cap ``eta / 10`` and absolute tolerance ``1e-8 N``.
    """
    N = spec.N
    eta, shift, window, below, quality, in_window = _setup(spec, alpha, eps, c1_power, c2_power, region)
    a = max(window[0], below + shift)
    b = min(window[1], spec.eigenvalues[alpha - 1] + shift)
    if b <= a:
        return Reconstruction(0j, quality, in_window, eta, window, 0.0, True)

    def f(E):
        return N / np.pi * tilde_green_line(spec, E, eta, j, i)

    res = adaptive_simpson(f, a, b, abs_tol=1e-8 * N, max_step=eta / 10)
    return Reconstruction(complex(res.value), quality, in_window, eta, window, res.error, res.converged)


def reconstruct_overlap_edge(spec, alpha, i, j, eps=DEFAULT_EPS, c1_power=DEFAULT_C1,
                             c2_power=DEFAULT_C2) -> Reconstruction:
    return reconstruct_overlap(spec, alpha, i, j, eps, c1_power, c2_power, "edge")


def reconstruct_overlap_smoothed(spec: SpectralData, alpha: int, i: int, j: int, eps: float = DEFAULT_EPS,
                                 c1_power: float = DEFAULT_C1, c2_power: float = DEFAULT_C2,
                                 log_power: float = 2.0) -> Reconstruction:
    """Edge reconstruction with the indicator replaced by ``q_alpha`` of a smoothed count.

    The count is ``tr (1_[E_L, E - phi eta] * theta_eta~)(H)`` with
    ``eta~ = N^{-2/3-6 eps}``; ``q_alpha`` is 1 within 1/3 of
    ``alpha - 1`` and 0 beyond 2/3.
    """
    N = spec.N
    eta, shift, window, _, quality, in_window = _setup(spec, alpha, eps, c1_power, c2_power, "edge")
    eta_t = N ** (-2 / 3 - 6 * eps)
    left = E_L(N, log_power)
    q = CutoffQ(alpha - 1)

    def f(E):
        E = np.asarray(E, dtype=float)
        upper = np.maximum(E - shift, left)
        weight = q(smoothed_count(spec, np.full(E.shape, left), upper, eta_t))
        out = np.zeros(E.shape, dtype=complex if spec.is_complex else float)
        nz = weight > 0
        if nz.any():
            out[nz] = weight[nz] * N / np.pi * tilde_green_line(spec, E[nz], eta, j, i)
        return out

    res = adaptive_simpson(f, window[0], window[1], abs_tol=1e-8 * N, max_step=eta / 10, max_depth=50)
    return Reconstruction(complex(res.value), quality, in_window, eta, window, res.error, res.converged)
