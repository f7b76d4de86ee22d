"""Independent reference computations used to check the library.

Each oracle takes a different route from the implementation it checks:
polynomial roots instead of closed forms, numerical quadrature instead of
antiderivatives, linear solves instead of spectral sums, plain loops
instead of vectorized index arithmetic.
"""
import math

import numpy as np
from scipy import integrate, optimize


def ks_brute(a, b):
    """Sup distance between empirical CDFs, evaluated at every sample point by double loop."""
    a = list(map(float, a))
    b = list(map(float, b))
    best = 0.0
    for x in a + b:
        fa = sum(1 for y in a if y <= x) / len(a)
        fb = sum(1 for y in b if y <= x) / len(b)
        best = max(best, abs(fa - fb))
    return best


def m_sc_roots(z):
    """Root of m^2 + z m + 1 = 0 with positive imaginary part, via numpy.roots."""
    r = np.roots([1.0, complex(z), 1.0])
    return complex(r[np.argmax(r.imag)])


def rho(E):
    return math.sqrt(max(4 - E * E, 0.0)) / (2 * math.pi)


def n_sc_quad(E):
    if E <= -2:
        return 0.0
    return integrate.quad(rho, -2, min(E, 2), epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def classical_location_brentq(alpha, N):
    return optimize.brentq(lambda x: n_sc_quad(x) - alpha / N, -2, 2, xtol=1e-14, rtol=1e-15)


def green_solve(H, z):
    return np.linalg.solve(H - z * np.eye(H.shape[0]), np.eye(H.shape[0]))


def smoothed_count_quad(eigs, E1, E2, eta):
    def f(y):
        return np.sum(eta / ((y - eigs) ** 2 + eta * eta)) / math.pi

    pts = [e for e in eigs if E1 < e < E2]
    return integrate.quad(f, E1, E2, points=pts[:50] or None, limit=2000, epsabs=1e-12, epsrel=1e-12)[0]


def ordering_loops(N):
    """Row-major upper-triangle enumeration, 1-based gamma."""
    out = {}
    g = 0
    for i in range(N):
        for j in range(i, N):
            g += 1
            out[(i, j)] = g
    return out


def hybrid_loops(v, w, gamma, scales, N, complex_entries):
    """H_gamma built entry by entry: w at ordering index <= gamma, v elsewhere."""
    H = np.zeros((N, N), dtype=complex if complex_entries else float)
    order = ordering_loops(N)
    for (i, j), g in order.items():
        x = w[g - 1] if g <= gamma else v[g - 1]
        val = scales[g - 1] * x
        if i == j:
            H[i, i] = val.real if complex_entries else val
        else:
            H[i, j] = val
            H[j, i] = np.conj(val)
    return H


def haar_column_overlaps(N, n, seed, component=0):
    """N |u(component)|^2 for n uniform unit vectors in C^N (normalized complex Gaussians)."""
    g = np.random.default_rng(seed)
    z = g.standard_normal((n, N)) + 1j * g.standard_normal((n, N))
    return N * np.abs(z[:, component]) ** 2 / np.sum(np.abs(z) ** 2, axis=1)


def three_point_moments(a, p, k):
    return 2 * p * a**k if k % 2 == 0 else 0.0


def gaussian_moment(k):
    return 0.0 if k % 2 else float(np.prod(np.arange(k - 1, 0, -2))) if k > 0 else 1.0
