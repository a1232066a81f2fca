import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridfv.errors import ConfigurationError, NumericalError
from hybridfv.grid import (
    CellField,
    build_grid_2d,
    build_uniform_grid,
    init_cell_averages,
    init_cell_averages_2d,
    sample_interface_velocity,
)
from hybridfv.problems import SIN, STEP, Profile


@pytest.mark.parametrize(
    "bounds, n, dx",
    [((-1.0, 1.0), 200, 0.01), ((0.0, 1.0), 1, 1.0), ((0.0, 60.0), 100, 0.6)],
)
def test_uniform_grid_spacing(bounds, n, dx):
    g = build_uniform_grid(*bounds, n)
    assert g.dx == pytest.approx(dx, rel=1e-15)
    assert g.n_interfaces == n + 1
    assert g.centers.size == n


def test_one_cell_grid_center():
    g = build_uniform_grid(0, 1, 1)
    np.testing.assert_array_equal(g.centers, [0.5])
    np.testing.assert_array_equal(g.interfaces, [0.0, 1.0])


@pytest.mark.parametrize("bounds, n", [((1.0, 1.0), 10), ((1.0, 0.0), 10), ((0.0, 1.0), 0), ((0.0, np.inf), 3)])
def test_invalid_grids_rejected(bounds, n):
    with pytest.raises(ConfigurationError):
        build_uniform_grid(*bounds, n)


@given(
    st.floats(-1e3, 1e3),
    st.floats(1e-3, 1e3),
    st.integers(1, 2000),
)
def test_widths_sum_to_extent(x_min, extent, n):
    g = build_uniform_grid(x_min, x_min + extent, n)
    # one roundoff unit of the coordinates, accumulated over the cells
    unit = np.spacing(max(abs(g.x_min), abs(g.x_max), g.length))
    assert abs(g.widths.sum() - g.length) <= 4 * unit * n


def test_interface_and_center_positions():
    g = build_uniform_grid(-1, 1, 8)
    i = np.arange(8)
    np.testing.assert_allclose(g.centers, -1 + (i + 0.5) * g.dx, rtol=0, atol=1e-15)
    np.testing.assert_allclose(g.interfaces[1:], -1 + (i + 1) * g.dx, rtol=0, atol=1e-15)


def test_constant_profile_averages_to_one():
    g = build_uniform_grid(-1, 1, 37)
    f = init_cell_averages(Profile(lambda x: np.ones_like(x)), g)
    np.testing.assert_allclose(f.values, 1.0, rtol=0, atol=1e-15)


def test_sin_cell_average_matches_antiderivative():
    g = build_uniform_grid(-1, 1, 200)
    f = init_cell_averages(SIN, g)
    cell = np.argmin(np.abs(g.interfaces - 0.0))  # cell [0, 0.01]
    expected = (np.cos(0.0) - np.cos(0.01 * np.pi)) / (0.01 * np.pi)
    assert f.values[cell] == pytest.approx(expected, rel=1e-12)


def test_sin_gauss_agrees_with_antiderivative():
    g = build_uniform_grid(-1, 1, 64)
    exact = init_cell_averages(SIN, g, "exact-antiderivative").values
    gauss = init_cell_averages(SIN, g, "gauss-5").values
    np.testing.assert_allclose(gauss, exact, rtol=0, atol=1e-13)


def test_step_indicator_averages():
    g = build_uniform_grid(-1, 1, 200)
    f = init_cell_averages(STEP, g).values
    x = g.centers
    np.testing.assert_array_equal(f[x < 0], 1.0)
    np.testing.assert_array_equal(f[x > 0], 0.0)


def test_half_covered_cell_gets_half():
    g = build_uniform_grid(-1, 1, 5)  # x = 0 is the centre of cell 2
    for quad in ("exact-antiderivative", "gauss-5"):
        f = init_cell_averages(STEP, g, quad).values
        assert f[2] == pytest.approx(0.5, abs=1e-14)


@given(st.lists(st.floats(-5, 5), min_size=5, max_size=5), st.integers(1, 40))
def test_gauss5_exact_on_quartics(coeffs, n):
    poly = np.polynomial.Polynomial(coeffs)
    anti = poly.integ()
    g = build_uniform_grid(-1.3, 2.1, n)
    f = init_cell_averages(Profile(poly), g, "gauss-5").values
    exact = np.diff(anti(g.interfaces)) / g.dx
    scale = max(1.0, np.max(np.abs(coeffs)) * 2.1**4)
    np.testing.assert_allclose(f, exact, rtol=0, atol=1e-12 * scale)


def test_exact_quadrature_requires_antiderivative():
    g = build_uniform_grid(0, 1, 4)
    with pytest.raises(ConfigurationError):
        init_cell_averages(Profile(np.cos), g, "exact-antiderivative")
    with pytest.raises(ConfigurationError):
        init_cell_averages(SIN, g, "simpson")


def test_cell_field_validation():
    g = build_uniform_grid(0, 1, 4)
    with pytest.raises(ConfigurationError):
        CellField(g, np.zeros(5))
    with pytest.raises(NumericalError):
        CellField(g, np.array([0.0, np.nan, 0.0, 0.0]))


def test_2d_averages_of_separable_polynomial():
    grid = build_grid_2d(-1, 1, 6, 0, 2, 4)
    f = init_cell_averages_2d(lambda x, y: x**2 * y + 3.0, grid)
    xe, ye = grid.x.interfaces, grid.y.interfaces
    mx = np.diff(xe**3 / 3) / grid.x.dx
    my = np.diff(ye**2 / 2) / grid.y.dx
    np.testing.assert_allclose(f.values, np.outer(my, mx) + 3.0, rtol=1e-13)
    assert f.values.shape == (4, 6)


@pytest.mark.parametrize(
    "V, n, expected",
    [
        (lambda t, x: np.ones_like(x), 4, np.ones(5)),
        (lambda t, x: x, 2, np.array([-1.0, 0.0, 1.0])),
        (lambda t, x: np.cbrt(x + 9.0) * 0.5 - 1.0, 2, np.array([0.0, np.cbrt(9.0) * 0.5 - 1, np.cbrt(10.0) * 0.5 - 1])),
    ],
)
def test_sample_interface_velocity(V, n, expected):
    g = build_uniform_grid(-1, 1, n)
    np.testing.assert_allclose(sample_interface_velocity(V, g), expected, atol=1e-15)


def test_sample_interface_velocity_rejects_nonfinite_and_is_pure():
    g = build_uniform_grid(-1, 1, 4)
    with pytest.raises(NumericalError):
        with np.errstate(divide="ignore"):
            sample_interface_velocity(lambda t, x: 1.0 / x, g)
    V = lambda t, x: np.sin(3 * x + t)  # noqa: E731
    a = sample_interface_velocity(V, g, 0.3)
    b = sample_interface_velocity(V, g, 0.3)
    assert a.tobytes() == b.tobytes()
