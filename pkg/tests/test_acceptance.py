"""Acceptance criteria, each run at its stated tolerance and sample size.

Every criterion prints one ``PASS`` / ``FAIL`` line (also collected in the
terminal summary).  All randomness derives from the fixed root seed below.
"""
import math
import time

import numpy as np
import pytest

import conftest
from oracles import green_solve, haar_column_overlaps
from wignerlab import comparison as cmp
from wignerlab import ensembles as ens
from wignerlab.cutoffs import SmoothedIndicator
from wignerlab.experiments import audit_trial
from wignerlab.helffer import direct_trace, hs_trace
from wignerlab.reconstruct import reconstruct_overlap_edge
from wignerlab.resolvent import count_sandwich, edge_window, green_matrix, tilde_green
from wignerlab.rng import derive_seed
from wignerlab.selftest import run_selftest
from wignerlab.semicircle import classical_location
from wignerlab.spectral import eigendecompose, eigenvector_overlap
from wignerlab.stats import ks_two_sample

ROOT = 20261019


def record(number, name, ok, detail, seconds, limit):
    ok = bool(ok) and seconds < limit
    line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}: {detail}; {seconds:.1f} s (limit {limit:.0f} s)"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def gue_sample(N, t, tag):
    return eigendecompose(ens.sample_matrix(ens.gue(N), derive_seed(ROOT, t, tag)).H)


def test_01_closed_forms():
    t0 = time.perf_counter()
    checks = run_selftest()
    detail = ", ".join(f"{c.name}={c.value:.1e}" for c in checks)
    assert record(1, "closed-form suite", all(c.value < 1e-12 for c in checks), detail,
                  time.perf_counter() - t0, 1)


def test_02_resolvent_identities():
    t0 = time.perf_counter()
    N = 50
    g = np.random.default_rng(derive_seed(ROOT, 0, "acc2/z"))
    worst_minor = worst_row = worst_tilde = 0.0
    for t in range(50):
        H = ens.sample_matrix(ens.gue(N), derive_seed(ROOT, t, "acc2")).H
        sd = eigendecompose(H)
        z = complex(g.uniform(-2.5, 2.5), g.uniform(0.01, 1.0))
        k = int(g.integers(N))
        S = green_matrix(sd, z)
        Hk = H.copy()
        Hk[k, :] = 0
        Hk[:, k] = 0
        Sk = green_matrix(eigendecompose(Hk), z)
        mask = np.ones(N, bool)
        mask[k] = False
        # removing row/column k: G_ij = G^(k)_ij + G_ik G_kj / G_kk
        minor = S - Sk - np.outer(S[:, k], S[k, :]) / S[k, k]
        worst_minor = max(worst_minor, np.abs(minor[np.ix_(mask, mask)]).max())
        # row expansion: G_kj = -G_kk sum_l h_kl G^(k)_lj for j != k
        row = S[k, :] + S[k, k] * (H[k, mask] @ Sk[mask, :])
        worst_row = max(worst_row, np.abs(row[mask]).max())
        if t < 10:
            lhs = z.imag * (lambda G: G @ G.conj().T)(green_solve(H, z))
            tg = np.array([[tilde_green(sd, z, i, j) for j in range(N)] for i in range(N)])
            worst_tilde = max(worst_tilde, np.abs(lhs - tg).max())
    ok = worst_minor < 1e-9 and worst_row < 1e-9 and worst_tilde < 1e-10
    assert record(2, "resolvent identities", ok,
                  f"minor {worst_minor:.1e}, row {worst_row:.1e}, tilde-G {worst_tilde:.1e}",
                  time.perf_counter() - t0, 10)


@pytest.mark.slow
def test_03_helffer_sjostrand():
    t0 = time.perf_counter()
    f = SmoothedIndicator(-1.0, 0.0, 1e-3)
    worst = 0.0
    for t in range(20):
        sd = gue_sample(100, t, "acc3")
        d = direct_trace(sd, f)
        worst = max(worst, abs(hs_trace(sd, f).value - d) / max(abs(d), 1.0))
    assert record(3, "Helffer-Sjostrand vs direct trace", worst <= 1e-3, f"max rel error {worst:.2e}",
                  time.perf_counter() - t0, 120)


@pytest.mark.slow
def test_04_counting_sandwich():
    t0 = time.perf_counter()
    N, trials = 500, 200
    lo, hi = edge_window(N)
    grid = np.linspace(lo, hi, 21)
    held = 0
    for t in range(trials):
        sd = gue_sample(N, t, "acc4")
        held += all(count_sandwich(sd, E, 0.05).holds for E in grid)
    rate = held / trials
    assert record(4, "smoothed counting sandwich", rate >= 0.99, f"holds in {rate:.3f} of trials",
                  time.perf_counter() - t0, 600)


@pytest.mark.slow
def test_05_overlap_reconstruction():
    t0 = time.perf_counter()
    N, trials = 200, 500
    errs, skipped = [], 0
    for t in range(trials):
        sd = gue_sample(N, t, "acc5")
        r = reconstruct_overlap_edge(sd, 1, 0, 1)
        if not r.quality:
            skipped += 1
            continue
        d = eigenvector_overlap(sd, 1, 0, 1)
        errs.append(abs(r.value - d) / abs(d))
    med, skip = float(np.median(errs)), skipped / trials
    assert record(5, "overlap reconstruction", med <= 0.05 and skip < 0.05,
                  f"median rel error {med:.4f}, skip fraction {skip:.3f}", time.perf_counter() - t0, 900)


def test_06_telescoping():
    t0 = time.perf_counter()
    N = 20
    spec_v = ens.gue(N)
    spec_w = ens.wigner_ensemble(N, "rademacher", ens.COMPLEX)
    Fs = {"trace": lambda H: float(np.trace(H).real),
          "lambda_1": lambda H: float(np.linalg.eigvalsh(H)[0]),
          "N|u_1(1)|^2": lambda H: float(N * abs(np.linalg.eigh(H)[1][0, 0]) ** 2)}
    worst = 0.0
    for t in range(20):
        v = ens.sample_entries(spec_v, derive_seed(ROOT, t, "acc6/v"))
        w = ens.sample_entries(spec_w, derive_seed(ROOT, t, "acc6/w"))
        Hv, Hw = ens.assemble_matrix(v, spec_v), ens.assemble_matrix(w, spec_w)
        for F in Fs.values():
            tel = cmp.telescope_decompose(v, w, F, spec_v)
            worst = max(worst, abs(tel.total - (F(Hv) - F(Hw))))
    assert record(6, "telescoping exactness", worst <= 1e-10, f"max |sum d - (F(v) - F(w))| {worst:.1e}",
                  time.perf_counter() - t0, 60)


@pytest.mark.slow
def test_07_audits():
    t0 = time.perf_counter()
    keys = ("average", "entry", "norm", "rigidity", "deloc")
    ok = []
    worst = dict.fromkeys(keys, 0.0)
    for t in range(50):
        a = audit_trial(gue_sample(1000, t, "acc7"), 2.0)
        ok.append(all(a[k] <= 1.0 for k in keys))
        for k in keys:
            worst[k] = max(worst[k], a[k])
    rate = float(np.mean(ok))
    detail = f"pass rate {rate:.2f}; worst ratios " + ", ".join(f"{k} {v:.2f}" for k, v in worst.items())
    assert record(7, "local law / rigidity / delocalization audits", rate >= 0.99, detail,
                  time.perf_counter() - t0, 1200)


@pytest.mark.slow
def test_08_edge_universality_trend():
    t0 = time.perf_counter()
    obs = cmp.ObservableSpec((("1", 0, 0),), (), "edge")
    rep = cmp.universality_experiment(lambda N: ens.wigner_ensemble(N, "gaussian", ens.REAL),
                                      lambda N: ens.wigner_ensemble(N, "rademacher", ens.REAL),
                                      obs, [100, 200, 400], 2000, derive_seed(ROOT, 0, "acc8"), resamples=200)
    ks = rep.ks()
    ok = ks[0] >= ks[1] >= ks[2] and ks[2] <= 0.08
    assert record(8, "edge universality trend", ok, "KS " + ", ".join(f"{k:.4f}" for k in ks),
                  time.perf_counter() - t0, 3600)


@pytest.mark.slow
def test_09_bulk_four_moment():
    t0 = time.perf_counter()
    obs = cmp.ObservableSpec((("N/2", 0, 0),), (), "bulk")
    three = ens.make_entry_law("three_point", a=math.sqrt(3), p=1 / 6)
    rep = cmp.universality_experiment(ens.gue(400), ens.wigner_ensemble(400, three, ens.COMPLEX), obs, [400],
                                      2000, derive_seed(ROOT, 0, "acc9"), resamples=200)
    ks = rep.ks()[0]
    assert record(9, "bulk four-moment universality", ks <= 0.08, f"KS {ks:.4f}",
                  time.perf_counter() - t0, 3600)


@pytest.mark.slow
def test_10_edge_repulsion():
    t0 = time.perf_counter()
    N = 400
    rep = cmp.repulsion_estimate(ens.gue(N), "edge", 0.1, [classical_location(1, N)], 5000,
                                 derive_seed(ROOT, 0, "acc10"))
    lo, hi = rep.ci(0, 0)
    ref = N ** -0.1
    assert record(10, "edge level repulsion", hi < ref,
                  f"estimate {rep.estimates[0, 0]:.4f}, 95% CI [{lo:.4f}, {hi:.4f}], reference {ref:.4f}",
                  time.perf_counter() - t0, 1800)


@pytest.mark.slow
def test_11_haar_eigenvectors():
    t0 = time.perf_counter()
    N, trials = 400, 4000
    x = np.array([N * abs(gue_sample(N, t, "acc11").vectors[0, N // 2 - 1]) ** 2 for t in range(trials)])
    y = haar_column_overlaps(N, trials, derive_seed(ROOT, 0, "acc11/haar"))
    ks = ks_two_sample(x, y)
    assert record(11, "GUE eigenvector vs Haar column", ks <= 0.05, f"KS {ks:.4f}",
                  time.perf_counter() - t0, 1800)
