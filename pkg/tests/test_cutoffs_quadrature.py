import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from wignerlab.cutoffs import D1_BOUND, D2_BOUND, CutoffQ, SmoothedIndicator, hs_chi, smoothstep
from wignerlab.quadrature import adaptive_simpson, gauss_legendre_panels


def test_smoothstep_bounds():
    t = np.linspace(0, 1, 200001)
    assert np.abs(smoothstep(t, 1)).max() == pytest.approx(D1_BOUND, rel=1e-8)
    assert np.abs(smoothstep(t, 2)).max() == pytest.approx(D2_BOUND, rel=1e-6)
    assert smoothstep(0.0) == 0 and smoothstep(1.0) == 1


def test_smoothstep_derivatives_finite_difference():
    t = np.linspace(0.01, 0.99, 50)
    h = 1e-6
    assert np.allclose((smoothstep(t + h) - smoothstep(t - h)) / (2 * h), smoothstep(t, 1), atol=1e-7)
    assert np.allclose((smoothstep(t + h, 1) - smoothstep(t - h, 1)) / (2 * h), smoothstep(t, 2), atol=1e-6)


def test_indicator_shape():
    f = SmoothedIndicator(-1, 0, 0.1)
    assert f(-0.5) == 1 and f(-1.2) == 0 and f(0.2) == 0
    assert f(-1.05) == pytest.approx(0.5) and f(0.05) == pytest.approx(0.5)
    x = np.linspace(-1.2, 0.2, 10001)
    assert np.abs(f(x, 1)).max() <= D1_BOUND / 0.1 + 1e-9
    assert np.abs(f(x, 2)).max() <= D2_BOUND / 0.01 + 1e-6
    assert f.support == (-1.1, 0.1)
    with pytest.raises(ValueError):
        SmoothedIndicator(1, 0, 0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(0, 1), st.floats(1e-3, 0.5))
def test_indicator_derivative_consistency(E1, width, w):
    f = SmoothedIndicator(E1, E1 + width, w)
    x = np.linspace(E1 - w, E1 + width + w, 301)
    integral = trapezoid(f(x, 1), x)
    assert abs(integral) < 1e-3


def test_cutoff_q():
    q = CutoffQ(2)
    assert q(2.2) == 1 and q(1.7) == 1 and q(2.7) == 0 and q(1.2) == 0
    assert 0 < q(2.5) < 1


def test_hs_chi():
    assert hs_chi(0.3) == 1 and hs_chi(-0.5) == 1 and hs_chi(1.0) == 0 and hs_chi(-2) == 0
    assert hs_chi(0.75) == pytest.approx(0.5)
    s = np.linspace(0.51, 0.99, 50)
    h = 1e-6
    assert np.allclose((hs_chi(s + h) - hs_chi(s - h)) / (2 * h), hs_chi(s, 1), atol=1e-6)


def test_simpson_polynomial_and_lorentzian():
    r = adaptive_simpson(lambda x: x**3 - 2 * x, 0, 2, abs_tol=1e-12)
    assert r.value == pytest.approx(0.0, abs=1e-12) and r.converged
    eta = 1e-4
    r = adaptive_simpson(lambda x: eta / (x * x + eta * eta), -1, 1, abs_tol=1e-9, max_step=eta / 10)
    assert r.value == pytest.approx(2 * math.atan(1 / eta), abs=1e-8)
    r = adaptive_simpson(lambda x: np.ones_like(x), 3, 1)
    assert r.value == pytest.approx(-2)


def test_simpson_complex():
    r = adaptive_simpson(lambda x: np.exp(1j * x), 0, math.pi, abs_tol=1e-12)
    assert r.value == pytest.approx(2j, abs=1e-11)


def test_simpson_reports_nonconvergence():
    r = adaptive_simpson(lambda x: np.where(x > 0.3, 1.0, 0.0) / np.sqrt(np.abs(x - 0.3) + 1e-300),
                         0, 1, abs_tol=1e-14, max_depth=5)
    assert not r.converged


def test_gauss_legendre_panels():
    x, w = gauss_legendre_panels(np.linspace(0, 1, 4), 8)
    assert np.sum(w * x**7) == pytest.approx(1 / 8, abs=1e-14)
    assert np.sum(w * np.exp(x)) == pytest.approx(math.e - 1, abs=1e-14)
