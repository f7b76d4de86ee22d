"""Traces ``tr f(H)`` through the Helffer-Sjostrand formula.

For a C^2 function ``f`` with compact support and an even cutoff
``chi(sigma)``,

    tr f(H) = (N / 2 pi) int int (i sigma f''(e) chi(sigma) + i f(e) chi'(sigma)
                                 - sigma f'(e) chi'(sigma)) m(e + i sigma) de dsigma.

The integrand at ``-sigma`` is the conjugate of the one at ``sigma``,
so only ``sigma > 0`` is integrated and the real part doubled.  The
strip ``0 < sigma < eta_tilde`` of the ``f''`` term is dropped and
bounded by ``N sup|f''| eta_tilde^2 / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoffs import SmoothedIndicator, hs_chi
from .quadrature import gauss_legendre_panels
from .resolvent import stieltjes
from .spectral import SpectralData


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class HSResult:
    value: float
    quad_error: float
    small_sigma_bound: float
    eta_tilde: float
    converged: bool


def _plateau_edges(a: float, b: float, width: float) -> np.ndarray:
    n = max(1, math.ceil((b - a) / width))
    return np.linspace(a, b, n + 1)


def _m_grid(spec: SpectralData, e: np.ndarray, sigma: float) -> np.ndarray:
    return stieltjes(spec, e + 1j * sigma)


def _hs_terms(spec: SpectralData, f: SmoothedIndicator, eta_tilde: float, order: int) -> float:
    N = spec.N
    lo, hi = f.support
    w = f.eta_d
    ramps = [(lo, f.E1), (f.E2, hi)]
    total = 0.0

    # chi' terms: sigma in [1/2, 1], smooth integrand
    s_nodes, s_w = gauss_legendre_panels(np.linspace(0.5, 1.0, 5), order)
    e_edges = np.concatenate([[lo], _plateau_edges(f.E1, f.E2, 0.05), [hi]])
    e_nodes, e_w = gauss_legendre_panels(e_edges, order)
    fe, f1 = f(e_nodes), f(e_nodes, 1)
    for s, ws in zip(s_nodes, s_w):
        m = _m_grid(spec, e_nodes, s)
        integrand = (1j * fe - s * f1) * hs_chi(s, 1) * m
        total += ws * np.sum(e_w * integrand).real

    # f'' term: sigma in (eta_tilde, 1), e on the two ramps, panels no wider than sigma
    s_edges = np.unique(np.concatenate([
        np.geomspace(eta_tilde, 0.5, max(2, int(6 * math.log10(0.5 / eta_tilde)) + 1)),
        [0.75, 1.0],
    ]))
    s_nodes, s_w = gauss_legendre_panels(s_edges, order)
    for s, ws in zip(s_nodes, s_w):
        n_e = max(1, math.ceil(w / s))
        acc = 0.0
        for a, b in ramps:
            en, ew = gauss_legendre_panels(np.linspace(a, b, n_e + 1), order)
            m = _m_grid(spec, en, s)
            acc += np.sum(ew * (1j * s * f(en, 2)) * m).real
        total += ws * hs_chi(s) * acc
    return N / math.pi * total


def hs_trace(spec: SpectralData, indicator: SmoothedIndicator, quad_tol: float = 1e-6,
             eta_tilde: float | None = None, order: int = 8, raise_on_failure: bool = False) -> HSResult:
    """``tr f(H)`` for a smoothed indicator ``f`` by two-dimensional quadrature.

    ``eta_tilde`` defaults to ``1e-3 * indicator.eta_d``.  The quadrature
    error is estimated by repeating the computation with Gauss-Legendre
    order ``order + 4``; ``converged`` is False (or
    :class:`QuadratureError` is raised) when that difference exceeds
    ``quad_tol``.
    """
    lo, hi = indicator.support
    if lo < -3 or hi > 3:
        raise ValueError("indicator support must lie within [-3, 3]")
    if eta_tilde is None:
        eta_tilde = 1e-3 * indicator.eta_d
    coarse = _hs_terms(spec, indicator, eta_tilde, order)
    fine = _hs_terms(spec, indicator, eta_tilde, order + 4)
    err = abs(fine - coarse)
    small = spec.N * (10 / math.sqrt(3)) / indicator.eta_d**2 * eta_tilde**2 / 2
    converged = err <= quad_tol
    if raise_on_failure and not converged:
        raise QuadratureError(f"quadrature estimate {err:.3g} exceeds tolerance {quad_tol:.3g}")
    return HSResult(float(fine), float(err), float(small), float(eta_tilde), bool(converged))


def direct_trace(spec: SpectralData, f) -> float:
    """Oracle ``sum_alpha f(lambda_alpha)``."""
    return float(np.sum(f(spec.eigenvalues)))
