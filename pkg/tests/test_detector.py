import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hybridfv.detector import (
    HybridParams,
    HybridWeights,
    hybrid_flux,
    hybrid_weights,
    interface_smoothness,
    smoothness_cellwise,
)
from hybridfv.errors import ConfigurationError
from hybridfv.grid import build_uniform_grid, init_cell_averages
from hybridfv.integrator import hybrid_flux_2d_sweep
from hybridfv.problems import SIN, STEP


def test_cubic_sequence_is_reproduced_exactly():
    i = np.arange(20, dtype=float)
    e = smoothness_cellwise(i**3, boundary="extend-constant").e
    # away from the padded ends the four-point interpolant is exact on cubics
    np.testing.assert_allclose(e[2:-2], 0.0, atol=1e-15)


def test_quartic_sequence_gives_constant_mismatch():
    i = np.arange(20, dtype=float)
    f = i**4
    sf = smoothness_cellwise(f, boundary="extend-constant")
    # fhat_i - f_i = 4 for i^4, scaled by the range of the sequence
    np.testing.assert_allclose(sf.e[2:-2], 4.0 / np.ptp(f), rtol=1e-12)
    assert float(sf.D) == np.ptp(f)


def test_constant_field_has_zero_indicator():
    assert np.all(smoothness_cellwise(np.full(10, 3.5)).e == 0.0)


def test_too_few_cells_rejected():
    with pytest.raises(ConfigurationError):
        smoothness_cellwise(np.arange(4.0))


@given(
    arrays(float, 12, elements=st.floats(-5, 5)),
    st.floats(0.01, 100),
    st.floats(-10, 10),
)
def test_indicator_invariant_under_affine_rescaling(f, a, b):
    if np.ptp(f) < 1e-6:
        return
    e1 = smoothness_cellwise(f).e
    e2 = smoothness_cellwise(a * f + b).e
    np.testing.assert_allclose(e1, e2, atol=1e-9)


@given(arrays(float, 15, elements=st.floats(-5, 5)))
def test_indicator_bounded(f):
    # |fhat - f| <= (10/6) * range: interpolation weights sum to 1 with l1 norm 10/6
    e = smoothness_cellwise(f).e
    assert np.all(e >= 0.0) and np.all(e <= 10.0 / 6.0 + 1e-12)


@pytest.mark.parametrize("V, expected", [(1.0, 0.1), (0.0, 0.1), (-1.0, 0.2)])
def test_interface_smoothness_takes_upwind_cell(V, expected):
    assert float(interface_smoothness(0.1, 0.2, V)) == expected


@pytest.mark.parametrize(
    "e, dx, alpha, w_W",
    [
        (0.0, 0.01, 0.75, 1.0),
        (0.1, 0.01, 1.0, np.exp(-1.0)),
        (1.0, 1e-4, 0.75, 0.0),
    ],
)
def test_weights_examples(e, dx, alpha, w_W):
    w = hybrid_weights(np.array(e), dx, HybridParams(alpha, 1.0))
    assert float(w.w_W) == pytest.approx(w_W, abs=1e-15)
    assert float(w.w_A + w.w_W) == pytest.approx(1.0)


@given(st.floats(0, 2), st.floats(1e-4, 0.5), st.floats(0.05, 1.0))
def test_weights_are_convex(e, dx, alpha):
    w = hybrid_weights(np.array(e), dx, HybridParams(alpha, 1.0))
    assert 0.0 <= float(w.w_W) <= 1.0
    assert float(w.w_A) + float(w.w_W) == pytest.approx(1.0)


def test_hybrid_flux_blends():
    w = HybridWeights(np.array(0.25), np.array(0.75))
    assert float(hybrid_flux(2.0, 6.0, w)) == 5.0


@pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
def test_invalid_alpha_rejected(alpha):
    with pytest.raises(ConfigurationError, match="alpha"):
        HybridParams(alpha)


def test_indicator_order_on_smooth_data():
    peaks = []
    for n in (100, 200, 400, 800):
        g = build_uniform_grid(-1.0, 1.0, n)
        peaks.append(smoothness_cellwise(init_cell_averages(SIN, g).values).e.max())
    orders = np.log2(np.array(peaks[:-1]) / np.array(peaks[1:]))
    assert np.all(orders > 3.8)


@pytest.mark.parametrize("n", [100, 200, 400, 800])
def test_step_jump_weights_closed_form(n):
    g = build_uniform_grid(-1.0, 1.0, n)
    f = init_cell_averages(STEP, g).values
    e = smoothness_cellwise(f).e
    w = hybrid_weights(e, g.dx, HybridParams(0.75, g.length))
    # the two cells touching the interior jump at x = 0 both have e = 1/2
    left = n // 2 - 1
    assert g.centers[left] < 0.0 < g.centers[left + 1]
    np.testing.assert_allclose(e[left : left + 2], 0.5, rtol=1e-14)
    expected = np.exp(-0.25 / (1.0 / n) ** 0.75)
    np.testing.assert_allclose(w.w_W[left : left + 2], expected, rtol=1e-10)


@pytest.mark.parametrize("n", [400, 800, 1600])
def test_step_jump_selects_adm_on_fine_grids(n):
    g = build_uniform_grid(-1.0, 1.0, n)
    e = smoothness_cellwise(init_cell_averages(STEP, g).values).e
    w = hybrid_weights(e, g.dx, HybridParams(0.75, g.length))
    assert np.all(w.w_A[n // 2 - 1 : n // 2 + 1] >= 1.0 - 1e-6)


def test_per_line_scale_is_taken_row_by_row():
    f = np.vstack([np.arange(8.0) ** 4, 1e-3 * np.arange(8.0) ** 4])
    per_line = smoothness_cellwise(f, "extend-constant", per_line=True).e
    np.testing.assert_allclose(per_line[0], per_line[1], rtol=1e-12)
    shared = smoothness_cellwise(f, "extend-constant").e
    assert np.all(shared[1, 2:-2] < per_line[1, 2:-2])


@pytest.mark.parametrize("axis", ["x", "y"])
def test_2d_sweep_constant_field_flux(axis):
    ny, nx = 8, 10
    f = np.full((ny, nx), 0.5)
    V = np.ones((ny, nx + 1)) if axis == "x" else np.ones((ny + 1, nx))
    F = hybrid_flux_2d_sweep(f, V, axis, HybridParams(0.75, 2.0), 0.01, 0.1)
    np.testing.assert_allclose(F, 0.5)


def test_2d_sweep_matches_1d_rows():
    from hybridfv.integrator import line_fluxes

    rng = np.random.default_rng(3)
    f = rng.random((6, 12))
    V = np.full((6, 13), 0.7)
    F = hybrid_flux_2d_sweep(f, V, "x", HybridParams(0.75, 1.0), 0.01, 0.1, scheme="weno5")
    for r in range(6):
        np.testing.assert_allclose(F[r], 0.7 * line_fluxes(f[r], V[r], 0.2, "weno5"))


def test_2d_sweep_rejects_bad_axis():
    with pytest.raises(ConfigurationError):
        hybrid_flux_2d_sweep(np.zeros((6, 6)), np.zeros((6, 7)), "z", None, 0.1, 0.1)


def test_2d_sweep_line_scale_uses_row_range():
    x = (np.arange(16) + 0.5) / 16
    small = 0.01 * np.sin(2 * np.pi * x) ** 3
    f = np.vstack([small, 100.0 * np.cos(2 * np.pi * x)])
    V = np.ones((2, 17))
    p = HybridParams(0.75, 1.0)
    alone = hybrid_flux_2d_sweep(small[None, :], V[:1], "x", p, 0.01, 1 / 16)[0]
    per_row = hybrid_flux_2d_sweep(f, V, "x", p, 0.01, 1 / 16, line_scale=True)
    np.testing.assert_allclose(per_row[0], alone, rtol=0, atol=1e-15)
    # a shared range shrinks the small row's indicator and shifts its weights
    shared = hybrid_flux_2d_sweep(f, V, "x", p, 0.01, 1 / 16, line_scale=False)
    assert np.max(np.abs(shared[0] - alone)) > 1e-6
