import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hybridfv.detector import HybridParams
from hybridfv.errors import ConfigurationError, StabilityError
from hybridfv.grid import CellField, build_grid_2d, build_uniform_grid, init_cell_averages
from hybridfv.integrator import (
    SchemeKind,
    StepControl,
    advect_1d,
    advect_2d,
    compute_dt,
    line_fluxes,
    spatial_residual,
    ssprk3_step,
)
from hybridfv.problems import SIN, STEP, rotation_velocity, unit_velocity
from oracles import ssprk3_shu_osher

SCHEMES = ["upwind", "adm", "weno5", "hybrid"]


def test_ssprk3_scalar_ode_third_order():
    errs = []
    for dt in (0.1, 0.05, 0.025):
        u = np.array([1.0])
        for _ in range(round(1.0 / dt)):
            u = ssprk3_step(u, dt, lambda v: -v)
        errs.append(abs(u[0] - np.exp(-1.0)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    np.testing.assert_allclose(orders, 3.0, atol=0.1)


@given(arrays(float, 6, elements=st.floats(-2, 2)), st.floats(0.01, 0.5))
def test_ssprk3_matches_convex_combination_form(u, dt):
    A = np.diag(np.full(6, -1.0)) + np.diag(np.full(5, 0.5), 1)

    def R(v):
        return A @ v + np.sin(v)

    np.testing.assert_allclose(ssprk3_step(u, dt, R), ssprk3_shu_osher(u, dt, R), atol=1e-13)


@pytest.mark.parametrize(
    "control, spacings, speeds, t, expected",
    [
        (StepControl(cfl=0.2, t_end=8.0), [0.01], [1.0], 0.0, 0.002),
        (StepControl(cfl=0.5, t_end=1.0), [0.1, 0.05], [1.0, 2.0], 0.0, 0.0125),
        (StepControl(cfl=0.2, t_end=1.0), [0.01], [1.0], 0.999, 0.001),
        (StepControl(cfl=0.2, t_end=1.0), [0.01], [0.0], 0.25, 0.75),
        (StepControl("fixed-dt", dt=0.125, t_end=1.0), [0.125], [1.0], 0.0, 0.125),
        (StepControl(cfl=0.2, t_end=1.0), [0.01], [1.0], 1.0, 0.0),
    ],
)
def test_compute_dt_examples(control, spacings, speeds, t, expected):
    assert compute_dt(control, spacings, speeds, t) == pytest.approx(expected, rel=1e-12)


def test_fixed_dt_cfl_violation_raises():
    with pytest.raises(StabilityError):
        compute_dt(StepControl("fixed-dt", dt=0.5, t_end=1.0), [0.1], [1.0])


@pytest.mark.parametrize("kw", [dict(mode="bogus"), dict(cfl=0.0), dict(mode="fixed-dt"), dict(t_end=-1.0)])
def test_step_control_validation(kw):
    with pytest.raises(ConfigurationError):
        StepControl(**kw)


@pytest.mark.parametrize("name, kind", [("WENO", SchemeKind.WENO5), ("adm", SchemeKind.ADM), ("hybrid", SchemeKind.HYBRID)])
def test_scheme_aliases(name, kind):
    assert SchemeKind.parse(name) is kind


def test_unknown_scheme():
    with pytest.raises(ConfigurationError):
        SchemeKind.parse("lax-wendroff")


@pytest.mark.parametrize("scheme", SCHEMES)
@given(f=arrays(float, 16, elements=st.floats(0, 1)), cfl=st.floats(0.05, 0.9))
def test_residual_conserves_mass(scheme, f, cfl):
    dx = 1.0 / 16
    V = np.ones(17)
    params = HybridParams(0.75, 1.0)
    r = spatial_residual(f, V, dx, scheme, cfl * dx, params=params)
    assert abs(r.sum()) <= 1e-12 * max(1.0, np.abs(r).max())


@pytest.mark.parametrize("scheme", SCHEMES)
def test_residual_of_constant_vanishes(scheme):
    r = spatial_residual(np.full(20, 0.7), np.full(21, -1.0), 0.05, scheme, 0.01, params=HybridParams())
    np.testing.assert_allclose(r, 0.0, atol=1e-13)


@given(arrays(float, 16, elements=st.floats(-1, 1)), arrays(float, 16, elements=st.floats(-1, 1)), st.floats(-3, 3))
def test_weno_and_upwind_fluxes_same_under_shift(f, g, a):
    # both are translation-equivariant: adding a constant shifts the face value
    V = np.ones(17)
    for scheme in ("upwind", "weno5"):
        np.testing.assert_allclose(line_fluxes(f + a, V, 0.1, scheme), line_fluxes(f, V, 0.1, scheme) + a, atol=1e-12)


def test_upwind_residual_linear():
    rng = np.random.default_rng(0)
    f, g = rng.random(12), rng.random(12)
    V = rng.uniform(-1, 1, 13)
    V[-1] = V[0]
    r = lambda u: spatial_residual(u, V, 0.1, "upwind")
    np.testing.assert_allclose(r(2 * f - 3 * g), 2 * r(f) - 3 * r(g), atol=1e-12)


@pytest.mark.parametrize("scheme", ["adm", "hybrid", "weno5"])
def test_velocity_reversal_mirrors_solution(scheme):
    g = build_uniform_grid(-1.0, 1.0, 50)
    f0 = init_cell_averages(STEP, g)
    ctrl = StepControl(cfl=0.4, t_end=0.3)
    right = advect_1d(f0, unit_velocity, ctrl, scheme).field.values
    mirrored = CellField(g, f0.values[::-1].copy())
    left = advect_1d(mirrored, lambda t, x: -unit_velocity(t, x), ctrl, scheme).field.values
    np.testing.assert_allclose(left[::-1], right, atol=1e-13)


@pytest.mark.parametrize("scheme", ["adm", "hybrid"])
def test_adm_family_keeps_step_in_unit_interval(scheme):
    g = build_uniform_grid(-1.0, 1.0, 80)
    res = advect_1d(init_cell_averages(STEP, g), unit_velocity, StepControl(cfl=0.5, t_end=2.0), scheme)
    tol = 1e-12 if scheme == "adm" else 1e-4
    assert res.field.values.min() >= -tol and res.field.values.max() <= 1.0 + tol


def test_advect_1d_full_period_and_snapshots():
    g = build_uniform_grid(-1.0, 1.0, 64)
    f0 = init_cell_averages(SIN, g)
    res = advect_1d(f0, unit_velocity, StepControl(cfl=0.3, t_end=2.0), "weno5", snapshot_times=(0.0, 1.0))
    assert res.t == 2.0 and set(res.snapshots) == {0.0, 1.0}
    np.testing.assert_array_equal(res.snapshots[0.0], f0.values)
    np.testing.assert_allclose(res.snapshots[1.0], -f0.values, atol=1e-4)
    np.testing.assert_allclose(res.field.values, f0.values, atol=1e-4)
    assert res.max_courant == pytest.approx(0.3)


def test_advect_2d_translation_and_bounds():
    g = build_grid_2d(-1.0, 1.0, 24, -1.0, 1.0, 24)
    X, Y = np.meshgrid(g.x.centers, g.y.centers)
    f0 = CellField(g, ((np.abs(X) < 0.3) & (np.abs(Y) < 0.3)).astype(float))
    res = advect_2d(f0, lambda x, y: (np.ones_like(x + y), np.ones_like(x + y)), StepControl(cfl=0.2, t_end=0.5),
                    "adm", snapshot_times=(0.0,))
    np.testing.assert_array_equal(res.snapshots[0.0], f0.values)
    assert res.field.values.min() >= -1e-12 and res.field.values.max() <= 1 + 1e-12
    assert res.field.values.sum() == pytest.approx(f0.values.sum(), rel=1e-12)


def test_advect_2d_rotation_conserves_mass():
    g = build_grid_2d(-1.0, 1.0, 20, -1.0, 1.0, 20)
    X, Y = np.meshgrid(g.x.centers, g.y.centers)
    f0 = CellField(g, np.exp(-10 * (X**2 + (Y - 0.4) ** 2)))
    res = advect_2d(f0, rotation_velocity, StepControl(cfl=0.2, t_end=0.5), "hybrid")
    assert res.field.values.sum() == pytest.approx(f0.values.sum(), rel=1e-12)
