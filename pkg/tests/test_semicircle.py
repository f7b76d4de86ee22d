import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import classical_location_brentq, m_sc_roots, n_sc_quad
from wignerlab.semicircle import (classical_location, classical_locations, m_sc, n_sc, rho_sc,
                                  write_locations_csv)


def test_rho_values():
    assert rho_sc(0.0) == pytest.approx(1 / math.pi, abs=1e-10)
    assert rho_sc(2.0) == 0.0 and rho_sc(-2.0) == 0.0
    assert rho_sc(1.0) == pytest.approx(math.sqrt(3) / (2 * math.pi), abs=1e-10)
    assert rho_sc(1.0) == pytest.approx(0.2756644477, abs=1e-10)
    assert rho_sc(3.0) == 0.0


def test_n_sc_values():
    assert n_sc(-2.0) == 0.0
    assert n_sc(0.0) == pytest.approx(0.5, abs=1e-15)
    assert n_sc(2.0) == pytest.approx(1.0, abs=1e-15)
    expected = 0.5 + math.sqrt(3) / (4 * math.pi) + 1 / 6
    assert n_sc(1.0) == pytest.approx(expected, abs=1e-14)
    assert n_sc(1.0) == pytest.approx(n_sc_quad(1.0), abs=1e-12)


@pytest.mark.parametrize("E", [-1.9, -1.2, -0.3, 0.4, 1.7, 1.99])
def test_n_sc_matches_quadrature(E):
    assert n_sc(E) == pytest.approx(n_sc_quad(E), abs=1e-12)


def test_classical_location_examples():
    assert classical_location(100, 100) == pytest.approx(2.0, abs=1e-12)
    assert classical_location(50, 100) == pytest.approx(0.0, abs=1e-12)
    g1 = classical_location(1, 100)
    assert g1 == pytest.approx(classical_location_brentq(1, 100), abs=1e-11)
    assert n_sc(g1) == pytest.approx(0.01, abs=1e-14)


def test_classical_location_edge_scaling():
    # n_sc(-2 + x) ~ (2/(3 pi)) x^{3/2}, so gamma_1 + 2 ~ c N^{-2/3} with c = (3 pi / 2)^{2/3}
    c = (1.5 * math.pi) ** (2 / 3)
    for N in (1000, 8000, 64000):
        ratio = (classical_location(1, N) + 2) * N ** (2 / 3)
        assert ratio == pytest.approx(c, rel=0.02)


def test_classical_location_range():
    with pytest.raises(ValueError):
        classical_location(0, 10)
    with pytest.raises(ValueError):
        classical_location(11, 10)


def test_classical_locations_invert_n_sc():
    N = 1000
    g = classical_locations(N)
    assert np.all(np.diff(g) > 0)
    assert np.abs(n_sc(g) - np.arange(1, N + 1) / N).max() < 1e-12


def test_m_sc_values():
    assert m_sc(1j) == pytest.approx(1j * (math.sqrt(5) - 1) / 2, abs=1e-12)
    assert m_sc(1e-9j) == pytest.approx(1j, abs=1e-8)
    with pytest.raises(ValueError):
        m_sc(0.5 - 0.1j)


def test_m_sc_matches_polynomial_roots():
    for z in [0.3 + 0.01j, -2 + 1e-4j, 2.5 + 0.2j, -3 + 1j, 1.999 + 1e-6j, 0.0 + 5j]:
        assert m_sc(z) == pytest.approx(m_sc_roots(z), abs=1e-12)


def test_m_sc_branch_continuity():
    for eta in (1e-3, 0.05, 1.0):
        E = np.arange(-4, 4, 1e-3)
        m = m_sc(E + 1j * eta)
        assert np.abs(np.diff(m)).max() < 0.1


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 5), st.floats(1e-8, 50))
def test_m_sc_fixed_point_and_bounds(E, eta):
    z = complex(E, eta)
    m = m_sc(z)
    assert abs(m + 1 / (z + m)) < 1e-12
    assert m.imag > 0
    assert abs(m) <= 1 + 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3))
def test_symmetries(E):
    assert rho_sc(E) == pytest.approx(rho_sc(-E), abs=1e-15)
    assert n_sc(E) + n_sc(-E) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 3000), st.data())
def test_quantile_property(N, data):
    alpha = data.draw(st.integers(1, N))
    assert abs(n_sc(classical_location(alpha, N)) - alpha / N) < 1e-12


def test_locations_csv(tmp_path):
    p = tmp_path / "gamma.csv"
    write_locations_csv(p, 5)
    lines = p.read_text().splitlines()
    assert len(lines) == 6
    assert float(lines[-1].split(",")[1]) == 2.0
