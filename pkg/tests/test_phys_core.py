import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocs.barriers import (DoubleRectangular, KGrid, Rectangular, SpatialGrid, TabulatedSymmetric, read_barrier_csv,
                          validate_barrier)
from ocs.constants import PhysicalConstants, electron_constants
from ocs.errors import AsymmetricBarrier, DegenerateGeometry, ValidationError

HBAR = 0.6582119569
C2 = 0.0380998


def test_velocity_from_constants():
    c = electron_constants()
    assert c.velocity(1.0) == pytest.approx(2 * C2 / HBAR, rel=1e-15)
    assert c.velocity(1.0) == pytest.approx(0.11577, abs=1e-5)


def test_energy_of_reference_wavenumber():
    assert electron_constants().energy(1.14556) == pytest.approx(0.05, rel=1e-4)


@given(st.floats(1e-4, 50.0))
def test_energy_wavenumber_round_trip(E):
    c = electron_constants()
    assert c.energy(c.wavenumber(E)) == pytest.approx(E, rel=1e-14)


def test_constants_reject_nonpositive():
    with pytest.raises(ValidationError):
        PhysicalConstants(0.0, C2)
    with pytest.raises(ValidationError):
        PhysicalConstants(HBAR, -1.0)


def test_rectangular_geometry():
    spec = Rectangular(0.2, 200.0, 215.0)
    rep = validate_barrier(spec)
    assert rep.x_c == 207.5 and rep.d == 15.0
    assert spec.potential([199.9, 207.0, 215.1]).tolist() == [0.0, 0.2, 0.0]


@pytest.mark.parametrize("spec", [Rectangular(0.2, 10.0, 10.0), Rectangular(0.2, 0.0, 5.0),
                                  DoubleRectangular(0.2, 0.0, 1.0, 10.0), DoubleRectangular(0.2, 1.0, -1.0, 10.0)])
def test_degenerate_geometry(spec):
    with pytest.raises(DegenerateGeometry):
        validate_barrier(spec)


def test_double_barrier_layout():
    spec = DoubleRectangular(1.0, 2.0, 3.0, 10.0)
    assert spec.b == 17.0 and spec.x_c == 13.5
    assert spec.segments == ((10.0, 12.0, 1.0), (12.0, 15.0, 0.0), (15.0, 17.0, 1.0))
    validate_barrier(spec)


def test_tabulated_symmetry_check(tmp_path):
    x = np.linspace(5.0, 15.0, 41)
    V = 0.3 * np.exp(-((x - 10.0) / 2) ** 2)
    path = tmp_path / "v.csv"
    path.write_text("x_nm,V_eV\n" + "".join(f"{float(a)!r},{float(b)!r}\n" for a, b in zip(x, V)))
    spec = read_barrier_csv(path)
    assert validate_barrier(spec).symmetry_residual < 1e-12
    skew = TabulatedSymmetric(x, V * (1 + 0.01 * (x - 10.0)))
    with pytest.raises(AsymmetricBarrier):
        validate_barrier(skew)
    with pytest.raises(DegenerateGeometry):
        validate_barrier(TabulatedSymmetric(x[::-1], V))


def test_grid_places_barrier_nodes():
    spec = Rectangular(0.2, 200.0, 215.0)
    g = SpatialGrid.with_nodes(-10.0, 230.0, 0.1, spec)
    x = g.x
    for node in (spec.a, spec.x_c, spec.b):
        assert abs(x[g.index_of(node)] - node) < 1e-9
    assert g.x_min <= -10.0 and g.x_max >= 230.0 and g.dx <= 0.1


@pytest.mark.parametrize("order", [2, 4])
def test_grid_quadrature_weights_exact_on_kinked_integrand(order):
    spec = Rectangular(0.2, 2.0, 3.0)
    g = SpatialGrid.with_nodes(0.0, 5.0, 0.05, spec)
    w = g.quadrature_weights([spec.a, spec.x_c, spec.b], order=order)
    f = np.abs(g.x - spec.x_c) ** 3  # cubic pieces with a kink at x_c
    exact = ((g.x_max - spec.x_c) ** 4 + (spec.x_c - g.x_min) ** 4) / 4
    assert f @ w == pytest.approx(exact, rel=1e-13)


def test_kgrid():
    kg = KGrid(0.5, 1.5, 11)
    assert kg.dk == pytest.approx(0.1)
    with pytest.raises(DegenerateGeometry):
        KGrid(0.0, 1.0, 5)


@settings(max_examples=30)
@given(st.floats(0.01, 1.0), st.floats(1.0, 100.0), st.floats(0.1, 20.0), st.floats(0.0, 10.0))
def test_double_barrier_always_symmetric(V0, a, w, l):
    rep = validate_barrier(DoubleRectangular(V0, w, l, a))
    assert rep.symmetry_residual < 1e-12
    assert math.isclose(rep.x_c, a + w + l / 2, rel_tol=1e-14)
