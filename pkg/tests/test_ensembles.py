import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gaussian_moment, three_point_moments
from wignerlab import ensembles as ens
from wignerlab.rng import derive_seed


# -- variance profiles ------------------------------------------------------

def test_wigner_profile_uniform():
    p = ens.make_variance_profile("wigner", 4)
    assert np.all(p.sigma2 == 0.25)
    assert np.abs(p.column_sums() - 1).max() <= 1e-15
    assert p.C0 == pytest.approx(1.0)


def test_band_profile_support_and_sums():
    p = ens.make_variance_profile("band", 100, c=0.5)
    assert p.params["half_width"] == 25
    i, j = np.indices((100, 100))
    d = np.minimum(abs(i - j), 100 - abs(i - j))
    assert np.all(p.sigma2[d > 25] == 0)
    assert np.all(p.sigma2[d <= 25] > 0)
    assert np.abs(p.sigma2.sum(axis=1) - 1).max() <= 1e-12
    assert np.abs(p.column_sums() - 1).max() <= 1e-12
    assert p.C0 == pytest.approx(100 / 51)


def test_profile_errors():
    with pytest.raises(ens.ProfileError):
        ens.make_variance_profile("band", 10, c=0.1)
    with pytest.raises(ens.ProfileError):
        ens.make_variance_profile("band", 10, c=1.5)
    with pytest.raises(ens.ProfileError):
        ens.make_variance_profile("nope", 10)
    with pytest.raises(ens.ProfileError):
        ens.make_variance_profile("custom", 2, sigma2=[[0.5, 0.4], [0.4, 0.5]])
    with pytest.raises(ens.ProfileError):
        ens.make_variance_profile("custom", 2, sigma2=[[0.5, 0.5], [0.6, 0.5]])


def test_profile_read_only():
    p = ens.make_variance_profile("wigner", 3)
    with pytest.raises(ValueError):
        p.sigma2[0, 0] = 1.0


def test_validate_wigner():
    r = ens.validate_profile(ens.make_variance_profile("wigner", 4))
    assert r.simple_top_eigenvalue
    assert abs(r.spectral_gap_lower) < 1e-10
    assert r.ok and r.row_sum_max_err < 1e-15


def test_validate_zero_row():
    s = np.zeros((3, 3))
    s[1:, 1:] = 0.5
    r = ens.validate_profile(ens.VarianceProfile(3, s))
    assert r.row_sum_max_err == pytest.approx(1.0)
    assert "row_sums" in r.flags and not r.ok


def test_validate_band_gap():
    p = ens.make_variance_profile("band", 100, c=0.5)
    r = ens.validate_profile(p)
    ev = np.linalg.eigvalsh(p.sigma2)
    assert r.spectral_gap_lower == pytest.approx(ev[-2], abs=1e-12)
    assert r.spectral_gap_lower < 1
    assert r.spectral_gap_upper > -1
    assert r.ok


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 120), st.floats(0.05, 1.0))
def test_profiles_invariants(N, c):
    kinds = [("wigner", {})]
    if math.floor(c * N / 2) >= 1:
        kinds.append(("band", {"c": c}))
    for kind, params in kinds:
        p = ens.make_variance_profile(kind, N, **params)
        assert np.abs(p.column_sums() - 1).max() <= 1e-12
        assert p.sigma2.max() <= p.C0 / N * (1 + 1e-15)
        assert np.array_equal(p.sigma2, p.sigma2.T)


# -- entry laws ---------------------------------------------------------------

def test_law_moments():
    assert ens.make_entry_law("rademacher").moments == (0, 1, 0, 1, 0, 1)
    assert ens.make_entry_law("gaussian").moments == tuple(gaussian_moment(k) for k in range(1, 7))
    tp = ens.make_entry_law("three_point", a=math.sqrt(3), p=1 / 6)
    want = tuple(three_point_moments(math.sqrt(3), 1 / 6, k) for k in range(1, 7))
    assert np.allclose(tp.moments, want, atol=1e-12)
    assert np.allclose(tp.moments, (0, 1, 0, 3, 0, 9), atol=1e-12)
    assert ens.make_entry_law("gaussian").moment(8) == 105


def test_law_errors():
    with pytest.raises(ens.EntryLawError):
        ens.make_entry_law("three_point", a=1.0, p=0.2)
    with pytest.raises(ens.EntryLawError):
        ens.make_entry_law("discrete", atoms=[0, 1], weights=[0.5, 0.5])
    with pytest.raises(ens.EntryLawError):
        ens.make_entry_law("cauchy")


def test_match_moments_examples():
    law = ens.match_moments(0, 3)
    assert np.allclose(law.moments, (0, 1, 0, 3, 0, 9), atol=1e-12)
    assert law.support_bound == pytest.approx(math.sqrt(3))
    assert ens.match_moments(0, 1).kind == "rademacher"
    with pytest.raises(ens.EntryLawError):
        ens.match_moments(0, 0.5)
    assert ens.moments_match(law, ens.make_entry_law("gaussian"), 4)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3), st.floats(0, 10))
def test_match_moments_property(m3, extra):
    m4 = 1 + m3 * m3 + extra
    law = ens.match_moments(m3, m4)
    assert law.moment(1) == pytest.approx(0, abs=1e-10)
    assert law.moment(2) == pytest.approx(1, abs=1e-10)
    assert law.moment(3) == pytest.approx(m3, abs=1e-9)
    assert law.moment(4) == pytest.approx(m4, abs=1e-9 * max(1, m4))


def test_moments_match_examples():
    g, r = ens.make_entry_law("gaussian"), ens.make_entry_law("rademacher")
    tp = ens.make_entry_law("three_point", a=math.sqrt(3), p=1 / 6)
    assert ens.moments_match(g, r, 2)
    rep = ens.moments_match(g, r, 4)
    assert not rep and rep.max_diff == pytest.approx(2.0)
    assert ens.moments_match(g, tp, 4)
    assert ens.moments_match(g, tp, 4, symmetry=ens.COMPLEX)
    assert not ens.moments_match(g, r, 4, symmetry=ens.COMPLEX)
    assert ens.moments_match(g, r, 2, symmetry=ens.COMPLEX)


def test_complex_moments_monte_carlo():
    # E|x|^4 for x=(a+ib)/sqrt(2): (m4 + 2 + m4)/4 = (m4+1)/2
    r = ens.make_entry_law("rademacher")
    assert ens._complex_moment(r, 2, 2) == pytest.approx(1.0)
    assert ens._complex_moment(ens.make_entry_law("gaussian"), 2, 2) == pytest.approx(2.0)
    assert ens._complex_moment(r, 0, 2) == pytest.approx(0.0)


def test_ppf_frequencies():
    law = ens.make_entry_law("three_point", a=math.sqrt(3), p=1 / 6)
    u = (np.arange(60000) + 0.5) / 60000
    x = law.ppf(u)
    assert np.mean(x == 0) == pytest.approx(2 / 3, abs=1e-4)
    assert np.mean(x > 0) == pytest.approx(1 / 6, abs=1e-4)


# -- sampling -------------------------------------------------------------------

def test_sampling_deterministic():
    spec = ens.gue(30)
    a, b = ens.sample_matrix(spec, 11), ens.sample_matrix(spec, 11)
    assert np.array_equal(a.H, b.H)
    assert not np.array_equal(a.H, ens.sample_matrix(spec, 12).H)


def test_complex_diagonal_real_and_hermitian():
    H = ens.sample_matrix(ens.gue(40), 3).H
    assert np.all(H.diagonal().imag == 0)
    assert np.array_equal(H, H.conj().T)


def test_offdiag_mean_clt():
    N = 2000
    spec = ens.goe(N)
    H = ens.sample_matrix(spec, derive_seed(1, 0, "clt")).H
    x = H[np.triu_indices(N, 1)] * math.sqrt(N)
    assert abs(x.mean()) <= 3 * (N * (N - 1) / 2) ** -0.5
    assert x.var() == pytest.approx(1.0, abs=0.01)


def test_variances_by_class():
    N, T = 20, 400
    specs = {"goe": ens.goe(N), "goe_textbook": ens.goe_textbook(N), "gue": ens.gue(N)}
    for name, spec in specs.items():
        Hs = np.array([ens.sample_matrix(spec, derive_seed(5, t, name)).H for t in range(T)])
        dv = np.mean(np.abs(np.diagonal(Hs, axis1=1, axis2=2)) ** 2) * N
        ov = np.mean(np.abs(Hs[:, 0, 1:]) ** 2) * N
        assert ov == pytest.approx(1.0, rel=0.1)
        assert dv == pytest.approx(2.0 if name == "goe_textbook" else 1.0, rel=0.1)


def test_complex_parts_scaled():
    spec = ens.wigner_ensemble(50, "rademacher", ens.COMPLEX)
    H = ens.sample_matrix(spec, 1).H
    off = H[np.triu_indices(50, 1)] * math.sqrt(50)
    assert np.allclose(np.abs(off.real), 1 / math.sqrt(2))
    assert np.allclose(np.abs(off.imag), 1 / math.sqrt(2))
    assert np.allclose(np.abs(H.diagonal() * math.sqrt(50)), 1)


def test_band_ensemble_zeros():
    prof = ens.make_variance_profile("band", 30, c=0.3)
    H = ens.sample_matrix(ens.wigner_ensemble(30, "gaussian", ens.REAL, prof), 2).H
    assert np.array_equal(H == 0, prof.sigma2 == 0)


# -- tails ------------------------------------------------------------------------

def test_tail_checks():
    r = ens.tail_check(ens.make_entry_law("rademacher"), 10_000, 1, grid=[1.5])
    assert r.tail[0] == 0 and r.passes
    tp = ens.make_entry_law("three_point", a=math.sqrt(3), p=1 / 6)
    assert ens.tail_check(tp, 10_000, 1, grid=[2.0]).tail[0] == 0
    g = ens.tail_check(ens.make_entry_law("gaussian"), 200_000, 7, grid=[3.0])
    from scipy.stats import norm
    assert g.ci_low[0] <= 2 * norm.sf(3) <= g.ci_high[0]
    assert g.passes and g.fitted_theta > 0
    with pytest.raises(ValueError):
        ens.tail_check(tp, 100, 1)
