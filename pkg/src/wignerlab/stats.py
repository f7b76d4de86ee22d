"""Statistics kernels: two-sample KS, percentile bootstrap, binomial intervals."""
from __future__ import annotations

import numpy as np
from scipy import stats as _st

from .rng import generator


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of two samples (sort and merge, exact)."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.abs(fa - fb).max())


def bootstrap_ci(samples, statistic=np.mean, resamples: int = 1000, level: float = 0.95,
                 seed: int = 0) -> tuple[float, float]:
    """Percentile bootstrap interval for ``statistic``; deterministic given ``seed``.

    ``statistic`` is called as ``statistic(x, axis=1)`` on the stacked
    resamples when it accepts ``axis``, else once per resample.
    """
    if resamples < 200:
        raise ValueError("use at least 200 resamples")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    idx = generator(seed).integers(0, x.size, size=(resamples, x.size))
    try:
        reps = np.asarray(statistic(x[idx], axis=1), dtype=float)
    except TypeError:
        reps = np.array([statistic(x[row]) for row in idx], dtype=float)
    tail = (1 - level) / 2
    lo, hi = np.quantile(reps, [tail, 1 - tail])
    est = float(statistic(x))
    # a constant sample must give the zero-width interval at the constant
    return float(min(lo, est)), float(max(hi, est))


def mean_difference_ci(a, b, resamples: int = 1000, level: float = 0.95, seed: int = 0,
                       paired: bool = False) -> tuple[float, float, float]:
    """``mean(a) - mean(b)`` with a percentile bootstrap interval.

    Paired samples (common random numbers) are resampled jointly.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    g = generator(seed)
    if paired:
        if a.shape != b.shape:
            raise ValueError("paired samples must have equal length")
        idx = g.integers(0, a.size, size=(resamples, a.size))
        reps = a[idx].mean(axis=1) - b[idx].mean(axis=1)
    else:
        ia = g.integers(0, a.size, size=(resamples, a.size))
        ib = g.integers(0, b.size, size=(resamples, b.size))
        reps = a[ia].mean(axis=1) - b[ib].mean(axis=1)
    est = float(a.mean() - b.mean())
    tail = (1 - level) / 2
    lo, hi = np.quantile(reps, [tail, 1 - tail])
    return est, float(min(lo, est)), float(max(hi, est))


def binomial_ci(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    tail = (1 - level) / 2
    lo = 0.0 if k == 0 else float(_st.beta.ppf(tail, k, n - k + 1))
    hi = 1.0 if k == n else float(_st.beta.ppf(1 - tail, k + 1, n - k))
    return lo, hi
