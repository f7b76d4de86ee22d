"""Lindeberg swapping and ensemble comparison experiments.

The independent entries are ordered row-major over ``i <= j``
(0-based), and the ordering index ``gamma = Phi(i, j)`` runs from 1 to
``gamma_max = N (N + 1) / 2``.  The hybrid ``H_gamma`` carries w-entries
at indices ``<= gamma`` and v-entries elsewhere, so ``H_0 = H^v`` and
``H_{gamma_max} = H^w``.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import ensembles as ens
from .resolvent import smoothed_count
from .rng import derive_seed
from .spectral import SpectralData, eigendecompose, scaled_eigenvalue
from .stats import binomial_ci, bootstrap_ci, ks_two_sample, mean_difference_ci
from .trials import run_trials

SKIP_LIMIT = 0.05


# ---------------------------------------------------------------------------
# ordering map and hybrids


@dataclass(frozen=True, eq=False)
class SwapSchedule:
    N: int
    rows: np.ndarray
    cols: np.ndarray

    @property
    def gamma_max(self) -> int:
        return self.N * (self.N + 1) // 2

    def forward(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        if not 0 <= i <= j < self.N:
            raise IndexError(f"({i}, {j}) outside the index set")
        return i * self.N - i * (i - 1) // 2 + (j - i) + 1

    def inverse(self, gamma: int) -> tuple[int, int]:
        if not 1 <= gamma <= self.gamma_max:
            raise IndexError(f"gamma={gamma} outside [1, {self.gamma_max}]")
        return int(self.rows[gamma - 1]), int(self.cols[gamma - 1])


def ordering_map(N: int) -> SwapSchedule:
    if N < 1:
        raise ValueError("N must be positive")
    rows, cols = np.triu_indices(N)
    return SwapSchedule(N, rows, cols)


def _check_arrays(v_entries, w_entries, spec: ens.EnsembleSpec):
    v = np.asarray(v_entries)
    w = np.asarray(w_entries)
    if v.shape != (spec.gamma_max,) or w.shape != (spec.gamma_max,):
        raise ValueError(f"entry arrays must have length gamma_max={spec.gamma_max}")
    return v, w


def hybrid_entries(v_entries, w_entries, gamma: int, spec: ens.EnsembleSpec) -> np.ndarray:
    v, w = _check_arrays(v_entries, w_entries, spec)
    if not 0 <= gamma <= spec.gamma_max:
        raise ValueError(f"gamma={gamma} outside [0, {spec.gamma_max}]")
    out = v.copy()
    out[:gamma] = w[:gamma]
    return out


def hybrid_matrix(v_entries, w_entries, gamma: int, spec: ens.EnsembleSpec) -> np.ndarray:
    """``H_gamma``: w-entries at ordering indices ``<= gamma``, v-entries elsewhere."""
    return ens.assemble_matrix(hybrid_entries(v_entries, w_entries, gamma, spec), spec)


@dataclass(frozen=True)
class Telescope:
    differences: np.ndarray  # d_gamma = F(H_{gamma-1}) - F(H_gamma), gamma = 1..gamma_max
    values: np.ndarray  # F(H_0), ..., F(H_{gamma_max})

    @property
    def total(self) -> float:
        return float(np.sum(self.differences))

    @property
    def endpoint_difference(self) -> float:
        return float(self.values[0] - self.values[-1])


def telescope_decompose(v_entries, w_entries, F: Callable[[np.ndarray], float],
                        spec: ens.EnsembleSpec) -> Telescope:
    """Evaluate ``F`` along the chain of hybrids, swapping one entry at a time."""
    v, w = _check_arrays(v_entries, w_entries, spec)
    sched = ordering_map(spec.N)
    scales = ens.entry_scales(spec)
    H = ens.assemble_matrix(v, spec)
    values = [F(H)]
    for g in range(1, spec.gamma_max + 1):
        a, b = sched.inverse(g)
        val = scales[g - 1] * w[g - 1]
        if a == b:
            H[a, a] = val.real if np.iscomplexobj(H) else val
        else:
            H[a, b] = val
            H[b, a] = np.conj(val)
        values.append(F(H))
    values = np.array(values, dtype=float)
    return Telescope(values[:-1] - values[1:], values)


@dataclass(frozen=True)
class RemainderReport:
    gamma: int
    z: complex
    remainders: np.ndarray  # index m-1 -> max-entry remainder after order m
    bounds: np.ndarray  # N^{-(m+1)/2} ||V||^{m+1} ||R||^{m+1} ||S||
    entry: complex  # the standardized entry at (a, b)

    def remainder(self, order: int) -> float:
        return float(self.remainders[order - 1])


def resolvent_expansion_remainder(v_entries, w_entries, gamma: int, z: complex, order: int,
                                  spec: ens.EnsembleSpec, side: str = "v") -> RemainderReport:
    """Remainders of the expansion of ``S = (Q + V/sqrt(N) - z)^{-1}`` around ``R = (Q - z)^{-1}``.

    ``Q`` is ``H_{gamma-1}`` with the entries at ``(a, b), (b, a)``
    (ordering index ``gamma``) removed; ``side="v"`` expands ``H_{gamma-1}``
    and ``side="w"`` expands ``H_gamma``.  For ``m = 1..order`` the
    max-entry norm of ``S - sum_{k<=m} (-N^{-1/2})^k (RV)^k R`` is
    returned together with its submultiplicative bound.
    """
    if not 1 <= order <= 5:
        raise ValueError("order must lie in 1..5")
    if side not in ("v", "w"):
        raise ValueError("side must be 'v' or 'w'")
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("Im z must be positive")
    v, w = _check_arrays(v_entries, w_entries, spec)
    if not 1 <= gamma <= spec.gamma_max:
        raise ValueError(f"gamma={gamma} outside [1, {spec.gamma_max}]")
    N = spec.N
    H = hybrid_matrix(v, w, gamma - 1 if side == "v" else gamma, spec)
    a, b = ordering_map(N).inverse(gamma)
    Q = H.copy()
    Q[a, b] = 0
    Q[b, a] = 0
    V = math.sqrt(N) * (H - Q)
    eye = np.eye(N)
    R = np.linalg.inv(Q - z * eye)
    S = np.linalg.inv(H - z * eye)
    RV = R @ V
    term = R.copy()
    approx = R.copy()
    rem = np.empty(order)
    bnd = np.empty(order)
    nR = np.linalg.norm(R, 2)
    nS = np.linalg.norm(S, 2)
    nV = np.linalg.norm(V, 2)
    for m in range(1, order + 1):
        term = -RV @ term / math.sqrt(N)
        approx = approx + term
        rem[m - 1] = np.abs(S - approx).max()
        bnd[m - 1] = N ** (-(m + 1) / 2) * (nV * nR) ** (m + 1) * nS
    entry = (v if side == "v" else w)[gamma - 1]
    return RemainderReport(gamma, z, rem, bnd, complex(entry))


# ---------------------------------------------------------------------------
# Green function comparison statistic


@dataclass(frozen=True)
class GFCTReport:
    N: int
    trials: int
    mean_v: float
    ci_v: tuple
    mean_w: float
    ci_w: tuple
    difference: float
    difference_ci: tuple
    reference_scale: float  # N^{-1/6}
    eta: float

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def gfct_functional(spec_data, E1: float, E2: float, eta: float) -> float:
    """``N int_{E1}^{E2} Im m(y + i eta) dy`` in closed form (pi times the smoothed count)."""
    return math.pi * smoothed_count(spec_data, E1, E2, eta)


def _eigvals_only(H):
    lam = np.linalg.eigvalsh(H)
    return SpectralData(lam, np.empty((0, 0)), "")


def gfct_statistic(ensemble_v: ens.EnsembleSpec, ensemble_w: ens.EnsembleSpec, F: Callable,
                   E1: float, E2: float, eps: float, trials: int, root_seed: int,
                   resamples: int = 1000, parallelism: int = 1) -> GFCTReport:
    """Monte Carlo estimate of ``(E^v - E^w) F(N int Im m(y + i N^{-2/3-eps}) dy)``.

    Trial ``t`` uses the seed ``derive_seed(root_seed, t, "gfct")`` for
    both ensembles (common random numbers), so identical ensembles give
    a difference of exactly zero.
    """
    N = ensemble_v.N
    if ensemble_w.N != N:
        raise ValueError("ensembles must have the same N")
    lim = N ** (-2 / 3 + eps)
    if abs(E1 + 2) > lim or abs(E2 + 2) > lim:
        raise ValueError(f"E1, E2 must satisfy |E + 2| <= N^(-2/3+eps) = {lim:.4g}")
    eta = N ** (-2 / 3 - eps)

    def task(t):
        seed = derive_seed(root_seed, t, "gfct")
        fv = F(gfct_functional(_eigvals_only(ens.sample_matrix(ensemble_v, seed).H), E1, E2, eta))
        fw = F(gfct_functional(_eigvals_only(ens.sample_matrix(ensemble_w, seed).H), E1, E2, eta))
        return fv, fw

    res = run_trials(task, trials, parallelism)
    xv = np.array([r[0] for r in res.values])
    xw = np.array([r[1] for r in res.values])
    d, lo, hi = mean_difference_ci(xv, xw, resamples, seed=root_seed, paired=True)
    return GFCTReport(
        N, len(xv), float(xv.mean()), bootstrap_ci(xv, resamples=resamples, seed=root_seed),
        float(xw.mean()), bootstrap_ci(xw, resamples=resamples, seed=root_seed + 1),
        d, (lo, hi), N ** (-1 / 6), eta,
    )


# ---------------------------------------------------------------------------
# observables and universality experiments

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.FloorDiv: operator.floordiv, ast.Div: operator.floordiv}


def resolve_index(expr, N: int) -> int:
    """Resolve an index given as an int or an expression in ``N`` such as ``"N/2"`` or ``"N-1"``."""
    if isinstance(expr, (int, np.integer)):
        return int(expr)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id == "N":
            return N
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported index expression {expr!r}")

    return int(ev(ast.parse(str(expr), mode="eval")))


@dataclass(frozen=True)
class ObservableSpec:
    """Eigenvector terms ``(alpha, i, j)`` giving ``N conj(u_alpha(i)) u_alpha(j)`` and
    eigenvalue terms ``beta`` giving the edge or bulk rescaled eigenvalue.

    ``theta`` maps the vector of observable values (eigenvector terms
    first, complex) to a real number; by default the real part of the
    first value.
    """

    vector_terms: tuple = ()
    value_terms: tuple = ()
    region: str = "edge"
    theta: Callable | None = None
    edge_index_limit: int = 10
    bulk_rho: float = 0.1

    @property
    def k(self) -> int:
        return max(len(self.vector_terms), len(self.value_terms))

    def resolved(self, N: int):
        vec = [(resolve_index(a, N), int(i), int(j)) for a, i, j in self.vector_terms]
        val = [resolve_index(b, N) for b in self.value_terms]
        for a, i, j in vec:
            if not (1 <= a <= N and 0 <= i < N and 0 <= j < N):
                raise ValueError(f"eigenvector term ({a}, {i}, {j}) out of range for N={N}")
        for b in val:
            if not 1 <= b <= N:
                raise ValueError(f"eigenvalue term {b} out of range for N={N}")
        labels = [a for a, _, _ in vec] + val
        if not labels:
            raise ValueError("observable has no terms")
        if self.region == "edge":
            # each eigenvector label paired with an eigenvalue label, as in the edge theorem
            extra = val + [N] * max(0, len(vec) - len(val))
            for a, b in zip([a for a, _, _ in vec] + [N] * max(0, len(val) - len(vec)), extra):
                if min(a, N - a) + min(b, N - b) > self.edge_index_limit:
                    raise ValueError(f"labels ({a}, {b}) are not edge labels (limit {self.edge_index_limit})")
        elif self.region == "bulk":
            lo, hi = self.bulk_rho * N, (1 - self.bulk_rho) * N
            for a in labels:
                if not lo <= a <= hi:
                    raise ValueError(f"label {a} outside the bulk window [{lo}, {hi}]")
        else:
            raise ValueError(f"region must be 'edge' or 'bulk', got {self.region!r}")
        return vec, val

    def component_names(self, N: int, complex_entries: bool) -> list[str]:
        vec, val = self.resolved(N)
        names = []
        for a, i, j in vec:
            names.append(f"Re N ubar_{a}({i}) u_{a}({j})")
            if complex_entries and i != j:
                names.append(f"Im N ubar_{a}({i}) u_{a}({j})")
        names += [f"scaled lambda_{b}" for b in val]
        return names

    def evaluate(self, sd, N: int) -> tuple[np.ndarray, float, bool]:
        """Scalar components, theta value and a reliability flag for one spectrum."""
        vec, val = self.resolved(N)
        bad = sd.unreliable() if vec else None
        raw = []
        comps = []
        reliable = True
        for a, i, j in vec:
            u = sd.vectors[:, a - 1]
            o = N * np.conj(u[i]) * u[j]
            raw.append(o)
            comps.append(o.real)
            if sd.is_complex and i != j:
                comps.append(o.imag)
            reliable &= not bad[a - 1]
        for b in val:
            s = scaled_eigenvalue(sd, b, self.region)
            raw.append(s)
            comps.append(s)
        theta = self.theta(np.array(raw)) if self.theta is not None else float(np.real(raw[0]))
        return np.array(comps, dtype=float), float(theta), bool(reliable)


@dataclass
class NResult:
    N: int
    trials: int
    skipped_v: int
    skipped_w: int
    ks: dict
    mean_v: float
    mean_w: float
    difference: float
    difference_ci: tuple
    seeds: dict
    samples_v: np.ndarray = field(repr=False, default=None)
    samples_w: np.ndarray = field(repr=False, default=None)

    @property
    def skip_flag(self) -> bool:
        return max(self.skipped_v, self.skipped_w) > SKIP_LIMIT * self.trials

    def to_dict(self) -> dict:
        return {
            "N": self.N, "trials": self.trials, "skipped_v": self.skipped_v, "skipped_w": self.skipped_w,
            "skip_flag": self.skip_flag, "ks": dict(self.ks), "mean_v": self.mean_v, "mean_w": self.mean_w,
            "difference": self.difference, "difference_ci": list(self.difference_ci), "seeds": dict(self.seeds),
        }


@dataclass
class ComparisonReport:
    name_v: str
    name_w: str
    region: str
    results: list

    def ks(self, component: int = 0) -> list[float]:
        return [list(r.ks.values())[component] for r in self.results]

    @property
    def flagged(self) -> bool:
        return any(r.skip_flag for r in self.results)

    def to_dict(self) -> dict:
        return {"ensemble_v": self.name_v, "ensemble_w": self.name_w, "region": self.region,
                "flagged": self.flagged, "per_N": [r.to_dict() for r in self.results]}


def _as_factory(e):
    return e if callable(e) else (lambda N, e=e: e)


def _sample_observable(factory, obs: ObservableSpec, N: int, trials: int, root_seed: int, tag: str,
                       parallelism: int):
    spec = factory(N)
    if spec.N != N:
        raise ValueError(f"ensemble factory returned N={spec.N}, expected {N}")

    def task(t):
        sd = eigendecompose(ens.sample_matrix(spec, derive_seed(root_seed, t, f"{tag}/N={N}")).H)
        return obs.evaluate(sd, N)

    res = run_trials(task, trials, parallelism)
    kept = [(c, th) for c, th, ok in res.values if ok]
    skipped = trials - len(kept)
    comps = np.array([c for c, _ in kept])
    thetas = np.array([th for _, th in kept])
    return spec, comps, thetas, skipped


def universality_experiment(ensemble_v, ensemble_w, obs: ObservableSpec, N_list: Sequence[int],
                            trials: int, root_seed: int, resamples: int = 1000,
                            parallelism: int = 1) -> ComparisonReport:
    """Compare the law of an observable under two ensembles for each ``N``.

    ``ensemble_v`` / ``ensemble_w`` are :class:`EnsembleSpec` objects or
    callables ``N -> EnsembleSpec``.  The two ensembles draw from
    independent streams (tags ``v`` and ``w``).  Trials with a
    degenerate gap next to an eigenvector label are skipped and counted.
    """
    fv, fw = _as_factory(ensemble_v), _as_factory(ensemble_w)
    results = []
    name_v = name_w = ""
    for N in N_list:
        obs.resolved(N)
        sv, cv, tv, skv = _sample_observable(fv, obs, N, trials, root_seed, "v", parallelism)
        sw, cw, tw, skw = _sample_observable(fw, obs, N, trials, root_seed, "w", parallelism)
        name_v, name_w = sv.name, sw.name
        names = obs.component_names(N, sv.symmetry == ens.COMPLEX or sw.symmetry == ens.COMPLEX)
        if tv.size and tw.size:
            ks = {name: ks_two_sample(cv[:, k], cw[:, k]) for k, name in enumerate(names)}
            d, lo, hi = mean_difference_ci(tv, tw, resamples, seed=root_seed + N)
            mv, mw = float(tv.mean()), float(tw.mean())
        else:  # every trial of one ensemble was skipped
            ks = {name: math.nan for name in names}
            d = lo = hi = mv = mw = math.nan
        results.append(NResult(N, trials, skv, skw, ks, mv, mw, d, (lo, hi),
                               {"root_seed": root_seed, "v_tag": f"v/N={N}", "w_tag": f"w/N={N}"},
                               tv, tw))
    return ComparisonReport(name_v, name_w, obs.region, results)


# ---------------------------------------------------------------------------
# level repulsion


def edge_partition_grid(N: int, alpha_exp: float, log_power: float = 1.0) -> np.ndarray:
    """Centers of subintervals of length ``2 N^{-2/3-alpha}`` covering ``|E + 2| <= N^{-2/3} (log N)^p``."""
    half = N ** (-2 / 3) * math.log(N) ** log_power
    w = N ** (-2 / 3 - alpha_exp)
    n = math.ceil(half / w)
    return -2.0 + w * (2 * np.arange(-n, n + 1))


@dataclass
class RepulsionReport:
    N: int
    region: str
    alpha_exps: np.ndarray
    E_grid: np.ndarray
    trials: int
    counts: np.ndarray  # [alpha, E] number of trials with >= 2 eigenvalues in the window
    union_counts: np.ndarray  # [alpha] trials with some grid window holding >= 2
    level: float = 0.95

    @property
    def estimates(self) -> np.ndarray:
        return self.counts / self.trials

    @property
    def union_estimates(self) -> np.ndarray:
        return self.union_counts / self.trials

    def ci(self, a: int, e: int) -> tuple[float, float]:
        return binomial_ci(int(self.counts[a, e]), self.trials, self.level)

    def union_ci(self, a: int) -> tuple[float, float]:
        return binomial_ci(int(self.union_counts[a]), self.trials, self.level)

    @property
    def reference(self) -> np.ndarray:
        return self.N ** (-self.alpha_exps)

    def to_dict(self) -> dict:
        return {
            "N": self.N, "region": self.region, "trials": self.trials,
            "alpha_exps": self.alpha_exps.tolist(), "E_grid": self.E_grid.tolist(),
            "estimates": self.estimates.tolist(),
            "ci": [[list(self.ci(a, e)) for e in range(len(self.E_grid))] for a in range(len(self.alpha_exps))],
            "union_estimates": self.union_estimates.tolist(),
            "union_ci": [list(self.union_ci(a)) for a in range(len(self.alpha_exps))],
            "reference": self.reference.tolist(),
        }


def window_half_width(N: int, region: str, alpha_exp: float) -> float:
    if region == "edge":
        return N ** (-2 / 3 - alpha_exp)
    if region == "bulk":
        return N ** (-1 - alpha_exp)
    raise ValueError(f"region must be 'edge' or 'bulk', got {region!r}")


def repulsion_counts(eigenvalues: np.ndarray, E_grid, half_width: float) -> np.ndarray:
    """Eigenvalue counts in ``[E - w, E + w]`` for each grid energy."""
    E = np.asarray(E_grid, dtype=float)
    return np.searchsorted(eigenvalues, E + half_width, side="right") - np.searchsorted(
        eigenvalues, E - half_width, side="left")


def repulsion_estimate(ensemble: ens.EnsembleSpec, region: str, alpha_exp, E_grid, trials: int,
                       root_seed: int, parallelism: int = 1, level: float = 0.95) -> RepulsionReport:
    """Empirical probability of two or more eigenvalues in ``E +- N^{-2/3-alpha}`` (edge)
    or ``E +- N^{-1-alpha}`` (bulk), per grid point and for the union over the grid.

    ``alpha_exp`` may be a sequence; all exponents are evaluated on the
    same samples.
    """
    N = ensemble.N
    alphas = np.atleast_1d(np.asarray(alpha_exp, dtype=float))
    if (alphas <= 0).any():
        raise ValueError("alpha exponents must be positive")
    E = np.atleast_1d(np.asarray(E_grid, dtype=float))
    widths = [window_half_width(N, region, a) for a in alphas]

    def task(t):
        lam = np.linalg.eigvalsh(ens.sample_matrix(ensemble, derive_seed(root_seed, t, "repulsion")).H)
        return np.array([repulsion_counts(lam, E, w) >= 2 for w in widths])

    res = run_trials(task, trials, parallelism)
    hits = np.array(res.values)  # trials x alphas x E
    n = hits.shape[0]
    return RepulsionReport(N, region, alphas, E, n, hits.sum(axis=0), hits.any(axis=2).sum(axis=0), level)
