"""Generalized Wigner ensembles: variance profiles, entry laws, sampling.

A generalized Wigner matrix has independent upper-triangular entries
``h_ij = sigma_ij * x_ij`` where ``x_ij`` is drawn from a standardized
law (mean 0, variance 1) and the variance profile ``sigma2`` is
symmetric with unit column sums.

Entries are sampled by inverse CDF from counter-addressed uniforms
(:mod:`wignerlab.rng`), position ``p`` of the upper-triangular
row-major ordering.  Two laws sampled with the same seed are therefore
coupled through their uniforms, and any single entry can be regenerated
on its own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np
from scipy import special

from . import rng

REAL = "real_symmetric"
COMPLEX = "complex_hermitian"
SYMMETRY_CLASSES = (REAL, COMPLEX)

_ROW_SUM_TOL = 1e-12


class ProfileError(ValueError):
    pass


class EntryLawError(ValueError):
    pass


# ---------------------------------------------------------------------------
# variance profiles


@dataclass(frozen=True, eq=False)
class VarianceProfile:
    """Matrix of entry variances ``sigma2[i, j] = E|h_ij|^2``.

    ``C0`` is recorded as ``N * max(sigma2)``, the smallest constant with
    ``sigma2 <= C0 / N``.
    """

    N: int
    sigma2: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.sigma2, dtype=float)
        if s.shape != (self.N, self.N):
            raise ProfileError(f"sigma2 must be {self.N}x{self.N}, got {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "sigma2", s)

    @property
    def C0(self) -> float:
        return float(self.N * self.sigma2.max())

    def column_sums(self) -> np.ndarray:
        return self.sigma2.sum(axis=0)


def make_variance_profile(kind: str, N: int, **params) -> VarianceProfile:
    """Build a variance profile.

    Parameters
    ----------
    kind : {"wigner", "band", "custom"}
    N : int
        Matrix size, at least 2.
    c : float
        Band width fraction in (0, 1] (``kind="band"``).  Entries with
        circular distance ``|i - j| mod N`` above ``floor(c N / 2)`` vanish.
    sigma2 : array_like
        Explicit variances (``kind="custom"``).

    Raises
    ------
    ProfileError
        For N < 2, an invalid band fraction, or a custom profile that is
        not symmetric, nonnegative and doubly stochastic.
    """
    N = int(N)
    if N < 2:
        raise ProfileError("N must be at least 2")
    if kind == "wigner":
        return VarianceProfile(N, np.full((N, N), 1.0 / N), "wigner", {})
    if kind == "band":
        c = float(params.get("c", 1.0))
        if not 0.0 < c <= 1.0:
            raise ProfileError(f"band width fraction must lie in (0, 1], got {c}")
        half_width = int(math.floor(c * N / 2))
        if half_width < 1:
            raise ProfileError(f"band c={c} at N={N} leaves only the diagonal; rows cannot be normalized")
        idx = np.arange(N)
        d = np.abs(idx[:, None] - idx[None, :])
        d = np.minimum(d, N - d)
        mask = d <= half_width
        # circulant: every row has the same support size
        s = mask / mask.sum(axis=1, keepdims=True)
        return VarianceProfile(N, s, "band", {"c": c, "half_width": half_width})
    if kind == "custom":
        s = np.asarray(params["sigma2"], dtype=float)
        if s.shape != (N, N):
            raise ProfileError("custom sigma2 has the wrong shape")
        if not np.array_equal(s, s.T):
            raise ProfileError("custom sigma2 must be symmetric")
        if (s < 0).any():
            raise ProfileError("custom sigma2 must be nonnegative")
        err = np.abs(s.sum(axis=0) - 1.0).max()
        if err > _ROW_SUM_TOL:
            raise ProfileError(f"column sums deviate from 1 by {err:.3g}")
        return VarianceProfile(N, s, "custom", {})
    raise ProfileError(f"unknown profile kind {kind!r}")


@dataclass(frozen=True)
class ProfileReport:
    row_sum_max_err: float
    entry_bound_c0: float
    spectral_gap_lower: float
    spectral_gap_upper: float
    simple_top_eigenvalue: bool
    flags: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.flags


def validate_profile(profile: VarianceProfile, tol: float = 1e-10) -> ProfileReport:
    """Check the unit-sum, spectral-gap and entry-size conditions on a profile.

    Never raises; violations are listed in ``flags``.  The gap fields are
    the second-largest and the smallest eigenvalue of the variance
    matrix, i.e. ``1 - delta_plus`` and ``-1 + delta_minus``.
    """
    s = profile.sigma2
    flags = []
    row_err = float(np.abs(s.sum(axis=1) - 1.0).max())
    if row_err > _ROW_SUM_TOL:
        flags.append("row_sums")
    if not np.allclose(s, s.T, rtol=0, atol=0):
        flags.append("asymmetric")
    ev = np.linalg.eigvalsh((s + s.T) / 2)
    top = ev[-1]
    simple = bool(abs(top - 1.0) <= tol and ev[-2] < 1.0 - tol)
    if not simple:
        flags.append("top_eigenvalue")
    if ev[0] <= -1.0 + tol:
        flags.append("lower_gap")
    return ProfileReport(
        row_sum_max_err=row_err,
        entry_bound_c0=profile.C0,
        spectral_gap_lower=float(ev[-2]),
        spectral_gap_upper=float(ev[0]),
        simple_top_eigenvalue=simple,
        flags=tuple(flags),
    )


# ---------------------------------------------------------------------------
# entry laws

_GAUSS_MOMENTS = (0.0, 1.0, 0.0, 3.0, 0.0, 15.0)


@dataclass(frozen=True, eq=False)
class EntryLaw:
    """A standardized real law (mean 0, variance 1) sampled by inverse CDF.

    Discrete kinds store sorted ``atoms`` and ``weights``; ``moments``
    holds the exact raw moments m1..m6.
    """

    kind: str
    moments: tuple
    atoms: tuple = ()
    weights: tuple = ()
    params: dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return self.kind != "gaussian"

    @property
    def support_bound(self) -> float:
        return max(abs(a) for a in self.atoms) if self.atoms else math.inf

    def moment(self, k: int) -> float:
        if k == 0:
            return 1.0
        if 1 <= k <= len(self.moments):
            return self.moments[k - 1]
        if self.kind == "gaussian":
            return 0.0 if k % 2 else float(special.factorial2(k - 1, exact=True))
        return float(sum(w * a**k for a, w in zip(self.atoms, self.weights)))

    def ppf(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.kind == "gaussian":
            return special.ndtri(u)
        cdf = np.cumsum(self.weights)
        cdf[-1] = 1.0
        idx = np.searchsorted(cdf, u, side="right")
        return np.asarray(self.atoms, dtype=float)[np.minimum(idx, len(self.atoms) - 1)]

    def describe(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.params)
        return d


def _discrete_moments(atoms, weights, order=6):
    return tuple(float(sum(w * a**k for a, w in zip(atoms, weights))) for k in range(1, order + 1))


def make_entry_law(kind: str, **params) -> EntryLaw:
    """Construct a standardized entry law.

    Kinds: ``gaussian``, ``rademacher``, ``three_point`` (``a``, ``p``:
    atoms -a, 0, a with weights p, 1-2p, p) and ``discrete`` (``atoms``,
    ``weights``).  Raises :class:`EntryLawError` if the law is not
    standardized to 1e-12 or a weight is outside [0, 1].
    """
    if kind == "gaussian":
        return EntryLaw("gaussian", _GAUSS_MOMENTS)
    if kind == "rademacher":
        return EntryLaw("rademacher", (0.0, 1.0, 0.0, 1.0, 0.0, 1.0), (-1.0, 1.0), (0.5, 0.5))
    if kind == "three_point":
        a, p = float(params["a"]), float(params["p"])
        if not (0.0 <= p <= 0.5) or a <= 0:
            raise EntryLawError(f"three_point needs a > 0 and weights in [0, 1]; got a={a}, p={p}")
        a2 = a * a
        if abs(2 * p * a2 - 1.0) > 1e-12:
            raise EntryLawError(f"three_point(a={a}, p={p}) has variance {2 * p * a2!r}, not 1")
        moments = (0.0, 1.0, 0.0, 2 * p * a2 * a2, 0.0, 2 * p * a2**3)
        if p == 0.5:
            atoms, weights = (-a, a), (0.5, 0.5)
        else:
            atoms, weights = (-a, 0.0, a), (p, 1.0 - 2 * p, p)
        return EntryLaw("three_point", moments, atoms, weights, {"a": a, "p": p})
    if kind == "discrete":
        atoms = np.asarray(params["atoms"], dtype=float)
        weights = np.asarray(params["weights"], dtype=float)
        if atoms.shape != weights.shape or atoms.ndim != 1 or atoms.size == 0:
            raise EntryLawError("atoms and weights must be matching 1-d sequences")
        if (weights < 0).any() or (weights > 1).any():
            raise EntryLawError("weights must lie in [0, 1]")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise EntryLawError("weights must sum to 1")
        order = np.argsort(atoms)
        atoms, weights = tuple(atoms[order].tolist()), tuple(weights[order].tolist())
        moments = _discrete_moments(atoms, weights)
        if abs(moments[0]) > 1e-12 or abs(moments[1] - 1.0) > 1e-12:
            raise EntryLawError(f"law is not standardized: mean {moments[0]!r}, variance {moments[1]!r}")
        return EntryLaw("discrete", moments, atoms, weights,
                        {"atoms": list(atoms), "weights": list(weights)})
    raise EntryLawError(f"unknown law kind {kind!r}")


def match_moments(m3: float, m4: float) -> EntryLaw:
    """Standardized law with prescribed third and fourth moments.

    Uses the three-point law with atoms ``-b, 0, c`` where ``c = b + m3``
    and ``b^2 + b m3 + m3^2 = m4``; it exists iff ``m4 >= 1 + m3^2``.
    The zero atom disappears on the boundary, and ``(0, 1)`` gives the
    Rademacher law.
    """
    m3, m4 = float(m3), float(m4)
    if m4 < 1.0 + m3 * m3 - 1e-12:
        raise EntryLawError(
            f"moment pair (m3={m3}, m4={m4}) is inadmissible: need m4 >= 1 + m3^2 = {1 + m3 * m3}"
        )
    if m3 == 0.0:
        if m4 <= 1.0:
            return make_entry_law("rademacher")
        return make_entry_law("three_point", a=math.sqrt(m4), p=0.5 / m4)
    b = (-m3 + math.sqrt(max(4 * m4 - 3 * m3 * m3, 0.0))) / 2
    c = b + m3
    t = 1.0 / (b + c)
    pb, pc = t / b, t / c
    p0 = max(0.0, 1.0 - pb - pc)
    if p0 <= 1e-15:
        atoms, weights = (-b, c), (pb, 1.0 - pb)
    else:
        atoms, weights = (-b, 0.0, c), (pb, p0, pc)
    return make_entry_law("discrete", atoms=atoms, weights=weights)


def _complex_moment(law: EntryLaw, l: int, u: int) -> complex:
    """``E conj(x)^l x^u`` for ``x = (a + i b) / sqrt(2)``, a and b iid from ``law``."""
    # (a - ib)^l (a + ib)^u expanded term by term
    total = 0j
    for r, s in product(range(l + 1), range(u + 1)):
        coeff = math.comb(l, r) * math.comb(u, s) * (-1j) ** r * (1j) ** s
        b_pow = r + s
        a_pow = l + u - b_pow
        total += coeff * law.moment(a_pow) * law.moment(b_pow)
    return total / 2 ** ((l + u) / 2)


@dataclass(frozen=True)
class MomentReport:
    matched: bool
    max_diff: float
    table: tuple  # ((label, value_a, value_b), ...)

    def __bool__(self):
        return self.matched


def moments_match(law_a: EntryLaw, law_b: EntryLaw, order: int = 4, tol: float = 1e-12,
                  symmetry: str = REAL) -> MomentReport:
    """Compare moments of two laws up to ``order`` (2 or 4).

    For ``complex_hermitian`` the comparison is over the mixed moments
    ``E conj(h)^l h^u``, ``l + u <= order``, of the composed complex
    entries.
    """
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    rows = []
    if symmetry == COMPLEX:
        for l in range(order + 1):
            for u in range(order + 1 - l):
                rows.append((f"conj^{l} h^{u}", _complex_moment(law_a, l, u), _complex_moment(law_b, l, u)))
    else:
        for k in range(1, order + 1):
            rows.append((f"m{k}", law_a.moment(k), law_b.moment(k)))
    diff = max(abs(a - b) for _, a, b in rows)
    return MomentReport(bool(diff <= tol), float(diff), tuple(rows))


# ---------------------------------------------------------------------------
# ensembles and sampling


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """Everything needed to sample a matrix, up to the seed.

    ``diagonal_factor`` multiplies the diagonal variances; it is 1 for
    every profile-consistent ensemble and 2 for the textbook GOE.
    """

    symmetry: str
    profile: VarianceProfile
    offdiag_law: EntryLaw
    diag_law: EntryLaw
    diagonal_factor: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.symmetry not in SYMMETRY_CLASSES:
            raise ValueError(f"unknown symmetry class {self.symmetry!r}")

    @property
    def N(self) -> int:
        return self.profile.N

    @property
    def gamma_max(self) -> int:
        return self.N * (self.N + 1) // 2


def wigner_ensemble(N: int, law: EntryLaw | str = "gaussian", symmetry: str = REAL,
                    profile: VarianceProfile | None = None, diag_law: EntryLaw | str | None = None,
                    name: str = "") -> EnsembleSpec:
    if isinstance(law, str):
        law = make_entry_law(law)
    if diag_law is None:
        diag_law = law
    elif isinstance(diag_law, str):
        diag_law = make_entry_law(diag_law)
    profile = profile or make_variance_profile("wigner", N)
    return EnsembleSpec(symmetry, profile, law, diag_law, 1.0, name)


def gue(N: int) -> EnsembleSpec:
    """Complex Hermitian Gaussian ensemble; coincides with the textbook GUE."""
    return wigner_ensemble(N, "gaussian", COMPLEX, name="gue")


def goe(N: int) -> EnsembleSpec:
    """Profile-consistent real Gaussian ensemble (diagonal variance 1/N)."""
    return wigner_ensemble(N, "gaussian", REAL, name="goe_profile")


def goe_textbook(N: int) -> EnsembleSpec:
    """Textbook GOE with diagonal variance 2/N (off the unit-sum normalization)."""
    g = make_entry_law("gaussian")
    return EnsembleSpec(REAL, make_variance_profile("wigner", N), g, g, 2.0, "goe_textbook")


def upper_indices(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major upper-triangular index arrays; position p has ordering index p + 1."""
    return np.triu_indices(N)


def sample_entries(spec: EnsembleSpec, seed: int) -> np.ndarray:
    """Standardized entries in swap order.

    Real: ``x_p = law.ppf(U[p])``.  Complex off-diagonal:
    ``(law.ppf(U[2p]) + i law.ppf(U[2p+1])) / sqrt(2)``; complex diagonal
    entries use ``U[2p]`` only and are real.
    """
    N = spec.N
    rows, cols = upper_indices(N)
    diag = rows == cols
    if spec.symmetry == REAL:
        u = rng.uniforms(seed, 0, rows.size)
        x = spec.offdiag_law.ppf(u)
        x[diag] = spec.diag_law.ppf(u[diag])
        return x
    u = rng.uniforms(seed, 0, 2 * rows.size).reshape(-1, 2)
    re = spec.offdiag_law.ppf(u[:, 0])
    im = spec.offdiag_law.ppf(u[:, 1])
    x = (re + 1j * im) / math.sqrt(2.0)
    x[diag] = spec.diag_law.ppf(u[diag, 0])
    return x


def entry_scales(spec: EnsembleSpec) -> np.ndarray:
    """Standard deviations sigma_ij in swap order."""
    rows, cols = upper_indices(spec.N)
    var = spec.profile.sigma2[rows, cols].copy()
    var[rows == cols] *= spec.diagonal_factor
    return np.sqrt(var)


def assemble_matrix(entries: np.ndarray, spec: EnsembleSpec) -> np.ndarray:
    """Hermitian matrix from standardized swap-ordered entries; pure and bit-reproducible."""
    N = spec.N
    rows, cols = upper_indices(N)
    entries = np.asarray(entries)
    if entries.shape != rows.shape:
        raise ValueError(f"expected {rows.size} entries, got {entries.shape}")
    dtype = complex if spec.symmetry == COMPLEX else float
    vals = entry_scales(spec) * entries
    H = np.zeros((N, N), dtype=dtype)
    H[rows, cols] = vals
    H[cols, rows] = np.conj(vals)
    if dtype is complex:
        H[np.diag_indices(N)] = H.diagonal().real
    return H


@dataclass(frozen=True, eq=False)
class MatrixSample:
    H: np.ndarray
    upper_entries: np.ndarray
    seed: int
    spec: EnsembleSpec


def sample_matrix(spec: EnsembleSpec, seed: int) -> MatrixSample:
    """Draw one matrix; a pure function of ``(spec, seed)``."""
    x = sample_entries(spec, seed)
    return MatrixSample(assemble_matrix(x, spec), x, int(seed), spec)


# ---------------------------------------------------------------------------
# tails


@dataclass(frozen=True)
class TailReport:
    grid: np.ndarray
    tail: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    fitted_theta: float
    bounded: bool

    @property
    def passes(self) -> bool:
        return self.bounded or self.fitted_theta > 0


def tail_check(law: EntryLaw, n_samples: int, seed: int,
               grid: Sequence[float] | None = None, level: float = 0.997) -> TailReport:
    """Empirical ``P(|X| >= x)`` on a grid with Clopper-Pearson intervals.

    ``fitted_theta`` is the largest theta on a grid in (0, 4] for which
    ``P(|X| >= x) <= exp(-x^theta) / theta`` holds at every grid point
    (0 if none does).
    """
    from .stats import binomial_ci

    if n_samples < 10_000:
        raise ValueError("tail_check needs at least 1e4 samples")
    grid = np.asarray(grid if grid is not None else np.arange(0.5, 6.01, 0.5), dtype=float)
    x = np.abs(law.ppf(rng.uniforms(seed, 0, n_samples)))
    counts = np.array([(x >= g).sum() for g in grid])
    tail = counts / n_samples
    lo, hi = zip(*(binomial_ci(int(c), n_samples, level) for c in counts))
    thetas = np.linspace(0.01, 4.0, 400)
    ok = [t for t in thetas if np.all(tail <= np.exp(-grid**t) / t)]
    return TailReport(grid, tail, np.array(lo), np.array(hi), float(max(ok)) if ok else 0.0, law.bounded)
