"""Lifshitz-Slyozov growth models with growth rate ``a(xi) = xi**(1/3)`` and ``b = 1``.

Two variants are provided:

* space-homogeneous: ``f_t + ((xi^(1/3) c - 1) f)_xi = 0`` with the algebraic
  closure ``c + int xi f dxi = rho``;
* space-inhomogeneous: the same size transport at every position ``x``, with
  ``(c + int xi f dxi)_t = c_xx`` and zero-flux walls, advanced by Lie
  splitting (size advection, then Crank-Nicolson diffusion).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from .detector import HybridParams
from .errors import ConfigurationError, StabilityError
from .grid import Grid1D, build_uniform_grid, init_cell_averages
from .integrator import SchemeKind, spatial_residual, ssprk3_step
from .kernels import CFL_TOL
from .problems import Profile


class DepletedMonomerWarning(RuntimeWarning):
    """The closure produced a negative concentration, which was clamped to zero."""


def ls_velocity(xi, c):
    """Growth velocity ``xi^(1/3) c - 1``; ``c`` broadcasts over leading axes."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0):
        raise ConfigurationError("size coordinate must be non-negative")
    return np.cbrt(xi) * np.asarray(c, dtype=float) - 1.0


def simpson_integral(values, dx: float, axis: int = -1):
    """Composite Simpson rule on equispaced samples.

    With an even sample count the last interval is closed with the trapezoid
    rule.
    """
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    n = v.shape[-1]
    if n < 3:
        raise ConfigurationError("Simpson's rule needs at least 3 samples")
    m = n if n % 2 == 1 else n - 1
    s = v[..., 0] + v[..., m - 1] + 4.0 * v[..., 1 : m - 1 : 2].sum(axis=-1) + 2.0 * v[..., 2 : m - 1 : 2].sum(axis=-1)
    total = s * dx / 3.0
    if m != n:
        total = total + 0.5 * dx * (v[..., -2] + v[..., -1])
    return total


def size_moment(f, xi_grid: Grid1D):
    """``int xi f dxi`` of cell data along the last axis."""
    return simpson_integral(np.asarray(f) * xi_grid.centers, xi_grid.dx)


def homogeneous_closure(f, xi_grid: Grid1D, rho: float) -> float:
    c = rho - float(size_moment(f, xi_grid))
    if c < 0.0:
        warnings.warn(
            f"monomer bath depleted (rho - moment = {c:.4g}); concentration clamped to 0",
            DepletedMonomerWarning,
            stacklevel=2,
        )
        return 0.0
    return c


def _courant(dt: float, xi_grid: Grid1D, V) -> float:
    return dt / xi_grid.dx * float(np.max(np.abs(V)))


def _params_for(scheme, xi_grid, params):
    if SchemeKind.parse(scheme) is SchemeKind.HYBRID and params is None:
        return HybridParams(domain_length=xi_grid.length)
    return params


@dataclass
class HomogeneousState:
    xi_grid: Grid1D
    f: np.ndarray
    rho: float
    c: float = field(default=math.nan)

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=float)
        if math.isnan(self.c):
            self.c = homogeneous_closure(self.f, self.xi_grid, self.rho)

    @property
    def moment(self) -> float:
        return float(size_moment(self.f, self.xi_grid))


def ls_homogeneous_step(
    state: HomogeneousState,
    dt: float,
    scheme,
    params: Optional[HybridParams] = None,
    concentration_update: str = "stage",
) -> HomogeneousState:
    """One SSP-RK3 step of the homogeneous model.

    With ``concentration_update="stage"`` the concentration is rebuilt from
    the closure at every Runge-Kutta stage; ``"step"`` freezes it at the value
    of the start of the step. The returned state always satisfies the closure.
    """
    g = state.xi_grid
    params = _params_for(scheme, g, params)
    xi_faces = g.interfaces
    if concentration_update not in ("stage", "step"):
        raise ConfigurationError(f"unknown concentration_update {concentration_update!r}")
    V_frozen = ls_velocity(xi_faces, state.c)

    def rhs(u):
        if concentration_update == "stage":
            V = ls_velocity(xi_faces, homogeneous_closure(u, g, state.rho))
        else:
            V = V_frozen
        if _courant(dt, g, V) > 1.0 + CFL_TOL:
            raise StabilityError(f"CFL violated in size advection: {_courant(dt, g, V):.4g} > 1")
        return spatial_residual(u, V, g.dx, scheme, dt, "zero", params)

    f_new = ssprk3_step(state.f, dt, rhs)
    return HomogeneousState(g, f_new, state.rho)


@dataclass(frozen=True)
class DiffusionOperator:
    """Neumann finite-volume Laplacian stored as tridiagonal bands."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    dx: float

    @property
    def n(self) -> int:
        return self.diag.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)

    def apply(self, c):
        c = np.asarray(c, dtype=float)
        out = self.diag * c
        out[:-1] += self.upper * c[1:]
        out[1:] += self.lower * c[:-1]
        return out


def build_neumann_laplacian(grid_x: Grid1D) -> DiffusionOperator:
    n = grid_x.n_cells
    if n < 2:
        raise ConfigurationError("Neumann Laplacian needs at least 2 cells")
    h2 = grid_x.dx**2
    diag = np.full(n, -2.0 / h2)
    diag[0] = diag[-1] = -1.0 / h2
    off = np.full(n - 1, 1.0 / h2)
    return DiffusionOperator(off.copy(), diag, off.copy(), grid_x.dx)


def _neumann_operator(grid_x: Grid1D) -> DiffusionOperator:
    # a single cell has no neighbours: the Neumann Laplacian is the zero map
    if grid_x.n_cells == 1:
        return DiffusionOperator(np.zeros(0), np.zeros(1), np.zeros(0), grid_x.dx)
    return build_neumann_laplacian(grid_x)


def cn_diffusion_step(c, delta_M, dt: float, op: DiffusionOperator) -> np.ndarray:
    """Solve ``(I - dt/2 L) c_new = (I + dt/2 L) c - delta_M``."""
    c = np.asarray(c, dtype=float)
    rhs = c + 0.5 * dt * op.apply(c) - np.asarray(delta_M, dtype=float)
    ab = np.zeros((3, op.n))
    ab[0, 1:] = -0.5 * dt * op.upper
    ab[1] = 1.0 - 0.5 * dt * op.diag
    ab[2, :-1] = -0.5 * dt * op.lower
    return solve_banded((1, 1), ab, rhs)


@dataclass
class NonhomogeneousState:
    x_grid: Grid1D
    xi_grid: Grid1D
    f: np.ndarray  # shape (n_x, n_xi)
    c: np.ndarray  # shape (n_x,)

    def __post_init__(self):
        self.f = np.asarray(self.f, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.f.shape != (self.x_grid.n_cells, self.xi_grid.n_cells):
            raise ConfigurationError("f must have shape (n_x, n_xi)")
        if self.c.shape != (self.x_grid.n_cells,):
            raise ConfigurationError("c must have one value per x cell")

    @property
    def moment(self) -> np.ndarray:
        return size_moment(self.f, self.xi_grid)


def _nonhomog_rhs(g, scheme, dt, params, V):
    def rhs(u):
        return spatial_residual(u, V, g.dx, scheme, dt, "zero", params, per_line_scale=True)

    return rhs


def ls_nonhomogeneous_step(
    state: NonhomogeneousState,
    dt: float,
    scheme,
    params: Optional[HybridParams] = None,
    op: Optional[DiffusionOperator] = None,
) -> NonhomogeneousState:
    """Advect every x cell in size with ``c`` frozen, then diffuse ``c`` (Crank-Nicolson)."""
    g = state.xi_grid
    params = _params_for(scheme, g, params)
    if op is None:
        op = _neumann_operator(state.x_grid)
    V = ls_velocity(g.interfaces[None, :], state.c[:, None])
    if _courant(dt, g, V) > 1.0 + CFL_TOL:
        raise StabilityError(f"CFL violated in size advection: {_courant(dt, g, V):.4g} > 1")
    M_old = state.moment
    f_new = ssprk3_step(state.f, dt, _nonhomog_rhs(g, scheme, dt, params, V))
    delta_M = size_moment(f_new, g) - M_old
    c_new = cn_diffusion_step(state.c, delta_M, dt, op)
    return replace(state, f=f_new, c=c_new)


def total_mass_homogeneous(state: HomogeneousState) -> float:
    return state.c + state.moment


def total_mass_nonhomogeneous(state: NonhomogeneousState) -> float:
    return float(np.sum(state.c + state.moment) * state.x_grid.dx)


# initial data -------------------------------------------------------------

LS_RHO = 41.0


def _indicator(lo, hi):
    return Profile(
        lambda x: np.where((x >= lo) & (x <= hi), 1.0, 0.0),
        antiderivative=lambda x: np.clip(np.asarray(x, dtype=float), lo, hi) - lo,
        breakpoints=(lo, hi),
        name=f"1[{lo},{hi}]",
    )


def _gaussian(amplitude, rate, center):
    return Profile(lambda x: amplitude * np.exp(-rate * (x - center) ** 2), name="gaussian")


def homogeneous_initial(kind: str, xi_grid: Grid1D) -> np.ndarray:
    """Cell averages of the regular (Gaussian) or irregular (block) size density."""
    if kind == "reg":
        return init_cell_averages(_gaussian(0.1, 0.1, 20.0), xi_grid).values
    if kind == "irreg":
        return init_cell_averages(_indicator(10.0, 30.0), xi_grid).values
    raise ConfigurationError(f"unknown initial data {kind!r}; use 'reg' or 'irreg'")


def nonhomogeneous_initial(kind: str, x_grid: Grid1D, xi_grid: Grid1D) -> NonhomogeneousState:
    """Plaque initial data: ``c = 0.5`` and a size density on ``x in [20, 40]``."""
    in_slab = init_cell_averages(_indicator(20.0, 40.0), x_grid).values
    if kind == "reg":
        size = init_cell_averages(_gaussian(0.01, 0.2, 30.0), xi_grid).values
    elif kind == "irreg":
        size = 0.01 * init_cell_averages(_indicator(30.0, 35.0), xi_grid).values
    else:
        raise ConfigurationError(f"unknown initial data {kind!r}; use 'reg' or 'irreg'")
    return NonhomogeneousState(x_grid, xi_grid, np.outer(in_slab, size), 0.5 * in_slab)


def default_xi_grid(n_xi: int = 800) -> Grid1D:
    return build_uniform_grid(0.0, 100.0, n_xi)


def default_x_grid(n_x: int = 100) -> Grid1D:
    return build_uniform_grid(0.0, 60.0, n_x)


# time marching ---------------------------------------------------------------

DEFAULT_MAX_SUBSTEPS = 64


@dataclass
class LSRun:
    """Trajectory of an LS run recorded at the requested output times."""

    snapshots: dict
    t: float
    steps: int
    substeps: int
    min_f: float
    mass: dict


def _output_schedule(t_end: float, output_times) -> list:
    times = sorted({float(t) for t in (output_times or ())} | {float(t_end)})
    if times[0] < 0.0 or times[-1] > t_end + 1e-12:
        raise ConfigurationError("output times must lie in [0, t_end]")
    return times


def _march(state, step, courant, mass, dt, t_end, output_times, max_courant, max_substeps):
    """Advance with macro step ``dt``, sub-cycling a step into ``k`` equal parts when needed.

    ``k`` starts from the Courant number at the beginning of the step and is
    doubled whenever a stage still violates the CFL condition; more than
    ``max_substeps`` parts is reported as a :class:`StabilityError`.
    """
    if not dt > 0.0:
        raise ConfigurationError("dt must be positive")
    if not 0.0 < max_courant <= 1.0:
        raise ConfigurationError("max_courant must lie in (0, 1]")
    if int(max_substeps) < 1:
        raise ConfigurationError("max_substeps must be at least 1")
    schedule = _output_schedule(t_end, output_times)
    snapshots, masses = {}, {}
    t, steps, substeps = 0.0, 0, 0
    min_f = float(np.min(state.f))
    for t_out in schedule:
        while t < t_out - 1e-9 * max(1.0, t_out):
            h = min(dt, t_out - t)
            k = max(1, math.ceil(courant(state, h) / max_courant - 1e-9))
            trial = None
            while k <= max_substeps:
                try:
                    trial = state
                    for _ in range(k):
                        trial = step(trial, h / k)
                    break
                except StabilityError:
                    trial = None
                    k *= 2
            if trial is None:
                raise StabilityError(
                    f"more than {max_substeps} substeps needed near t = {t:.6g} "
                    f"(Courant {courant(state, h):.4g} at dt = {h:.4g})",
                    step=steps,
                )
            state = trial
            t = t_out if t_out - (t + h) <= 1e-9 * max(1.0, t_out) else t + h
            steps += 1
            substeps += k
            min_f = min(min_f, float(np.min(state.f)))
        snapshots[t_out] = state
        masses[t_out] = mass(state)
    return LSRun(snapshots, t, steps, substeps, min_f, masses)


def run_homogeneous(
    state: HomogeneousState,
    dt: float,
    t_end: float,
    scheme,
    output_times=(),
    params: Optional[HybridParams] = None,
    concentration_update: str = "stage",
    max_courant: float = 1.0,
    max_substeps: int = DEFAULT_MAX_SUBSTEPS,
) -> LSRun:
    """March the homogeneous model; snapshots hold whole :class:`HomogeneousState` objects."""
    g = state.xi_grid
    params = _params_for(scheme, g, params)

    def courant(s, h):
        return _courant(h, g, ls_velocity(g.interfaces, s.c))

    def step(s, h):
        return ls_homogeneous_step(s, h, scheme, params, concentration_update)

    return _march(state, step, courant, total_mass_homogeneous, dt, t_end, output_times, max_courant, max_substeps)


def run_nonhomogeneous(
    state: NonhomogeneousState,
    dt: float,
    t_end: float,
    scheme,
    output_times=(),
    params: Optional[HybridParams] = None,
    max_courant: float = 1.0,
    max_substeps: int = DEFAULT_MAX_SUBSTEPS,
) -> LSRun:
    """March the space-inhomogeneous model with Lie splitting."""
    g = state.xi_grid
    params = _params_for(scheme, g, params)
    op = _neumann_operator(state.x_grid)

    def courant(s, h):
        return _courant(h, g, ls_velocity(g.interfaces[None, :], s.c[:, None]))

    def step(s, h):
        return ls_nonhomogeneous_step(s, h, scheme, params, op)

    return _march(state, step, courant, total_mass_nonhomogeneous, dt, t_end, output_times, max_courant, max_substeps)
