"""Independent Monte Carlo trials with a fixed reduction order."""
from __future__ import annotations

import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field


class TrialFailureError(RuntimeError):
    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures


@dataclass
class TrialResults:
    values: list  # successful results, ordered by trial index
    indices: list
    failures: dict = field(default_factory=dict)  # trial index -> error text
    seconds: list = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return len(self.failures)

    @property
    def throughput(self) -> float:
        total = sum(self.seconds)
        return len(self.seconds) / total if total > 0 else float("inf")


def _timed(task, t):
    start = time.perf_counter()
    try:
        return t, task(t), None, time.perf_counter() - start
    except Exception as exc:  # isolated per trial
        msg = f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"
        return t, None, msg, time.perf_counter() - start


def run_trials(task, n_trials: int, parallelism: int = 1, max_failure_fraction: float = 0.01,
               start: int = 0) -> TrialResults:
    """Run ``task(trial_index)`` for every trial and collect results in trial order.

    Each task must derive its randomness from its trial index, so the
    output does not depend on ``parallelism``.  Failed trials are recorded
    and excluded; more than ``max_failure_fraction`` failures raises
    :class:`TrialFailureError`.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    idx = range(start, start + n_trials)
    if parallelism <= 1:
        out = [_timed(task, t) for t in idx]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            out = list(pool.map(lambda t: _timed(task, t), idx))
    out.sort(key=lambda r: r[0])
    res = TrialResults([], [], {}, [])
    for t, val, err, secs in out:
        res.seconds.append(secs)
        if err is None:
            res.values.append(val)
            res.indices.append(t)
        else:
            res.failures[t] = err
    if res.n_failed > max_failure_fraction * n_trials:
        raise TrialFailureError(f"{res.n_failed} of {n_trials} trials failed", res.failures)
    return res
