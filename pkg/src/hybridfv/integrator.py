"""Conservative finite-volume residuals and SSP-RK3 time stepping."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .detector import HybridParams, hybrid_flux, hybrid_weights, interface_smoothness, smoothness_cellwise
from .errors import ConfigurationError, StabilityError
from .kernels import CFL_TOL, adm_flux, admissible_interval, weno5_reconstruct

GHOSTS = 3


class SchemeKind(str, enum.Enum):
    ADM = "adm"
    WENO5 = "weno5"
    HYBRID = "hybrid"
    UPWIND = "upwind"

    @classmethod
    def parse(cls, name) -> "SchemeKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"weno": "weno5", "anti-diffusive": "adm", "hybrid-adm-weno": "hybrid"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ConfigurationError(f"unknown scheme {name!r}") from None


def _pad_cells(f: np.ndarray, boundary: str) -> np.ndarray:
    pad = [(0, 0)] * (f.ndim - 1) + [(GHOSTS, GHOSTS)]
    if boundary == "periodic":
        return np.pad(f, pad, mode="wrap")
    if boundary == "zero":
        return np.pad(f, pad, mode="constant")
    raise ConfigurationError(f"unknown boundary {boundary!r}")


def _pad_velocity(V: np.ndarray, boundary: str) -> np.ndarray:
    # interfaces -1 .. n+1; interface n coincides with 0 when periodic
    if boundary == "periodic":
        return np.concatenate([V[..., -2:-1], V, V[..., 1:2]], axis=-1)
    return np.pad(V, [(0, 0)] * (V.ndim - 1) + [(1, 1)], mode="edge")


def _select(V, pos, neg):
    if np.all(V >= 0.0):
        return pos
    if np.all(V < 0.0):
        return neg
    return np.where(V >= 0.0, pos, neg)


def line_fluxes(
    f,
    V,
    nu: float,
    scheme,
    boundary: str = "periodic",
    dx: Optional[float] = None,
    params: Optional[HybridParams] = None,
    per_line_scale: bool = False,
) -> np.ndarray:
    """Interface values ``f_{i-1/2}``, ``i = 0..n``, along the last axis.

    ``V`` holds the ``n + 1`` interface velocities (broadcast against the
    leading axes of ``f``). ``nu`` is the ratio used inside the ADM bounds.
    """
    scheme = SchemeKind.parse(scheme)
    f = np.asarray(f, dtype=float)
    n = f.shape[-1]
    V = np.broadcast_to(np.asarray(V, dtype=float), f.shape[:-1] + (n + 1,))
    g = _pad_cells(f, boundary)
    left = g[..., 2 : n + 3]
    right = g[..., 3 : n + 4]

    if scheme is SchemeKind.UPWIND:
        return np.where(V > 0.0, left, np.where(V < 0.0, right, 0.5 * (left + right)))

    if scheme in (SchemeKind.WENO5, SchemeKind.HYBRID):
        f_W = _select(
            V,
            weno5_reconstruct(g[..., 0 : n + 1], g[..., 1 : n + 2], left, right, g[..., 4 : n + 5]),
            weno5_reconstruct(g[..., 5 : n + 6], g[..., 4 : n + 5], right, left, g[..., 1 : n + 2]),
        )
        if scheme is SchemeKind.WENO5:
            return f_W

    Ve = _pad_velocity(V, boundary)
    pos = V >= 0.0
    up = np.where(pos, left, right)
    down = np.where(pos, right, left)
    back = np.where(pos, g[..., 1 : n + 2], g[..., 4 : n + 5])
    v_back = np.where(pos, Ve[..., 0 : n + 1], -Ve[..., 2 : n + 3])
    bounds = admissible_interval(up, back, down, np.abs(V), v_back, nu)
    f_A = adm_flux(bounds, down)
    if scheme is SchemeKind.ADM:
        return f_A

    if params is None or dx is None:
        raise ConfigurationError("hybrid scheme needs dx and HybridParams")
    mode = "periodic" if boundary == "periodic" else "extend-constant"
    e = smoothness_cellwise(f, mode, per_line=per_line_scale).e
    e = np.pad(e, [(0, 0)] * (e.ndim - 1) + [(1, 1)], mode="wrap" if mode == "periodic" else "edge")
    e_face = interface_smoothness(e[..., :-1], e[..., 1:], V)
    return hybrid_flux(f_A, f_W, hybrid_weights(e_face, dx, params))


def spatial_residual(
    f,
    V,
    dx: float,
    scheme,
    dt: float = 0.0,
    boundary: str = "periodic",
    params: Optional[HybridParams] = None,
    per_line_scale: bool = False,
) -> np.ndarray:
    """Rate ``-((V f)_{i+1/2} - (V f)_{i-1/2}) / dx`` along the last axis.

    ``dt`` is the full step; it is needed by the ADM bounds (``nu = dt/dx``).
    """
    flux = line_fluxes(f, V, dt / dx, scheme, boundary, dx, params, per_line_scale)
    F = np.broadcast_to(V, flux.shape) * flux
    return -(F[..., 1:] - F[..., :-1]) / dx


def spatial_residual_2d(
    f,
    Vx,
    Vy,
    dx: float,
    dy: float,
    scheme,
    dt: float = 0.0,
    params_x: Optional[HybridParams] = None,
    params_y: Optional[HybridParams] = None,
    boundary: str = "periodic",
    line_scale: bool = True,
) -> np.ndarray:
    """Unsplit dimension-by-dimension residual for a ``(ny, nx)`` field.

    ``Vx`` has shape ``(ny, nx + 1)`` and ``Vy`` shape ``(ny + 1, nx)``. The
    ADM bounds use twice the one-dimensional ratio, so the full update is the
    average of two one-dimensional updates that each satisfy the bounds.
    """
    Fx = hybrid_flux_2d_sweep(f, Vx, "x", params_x, dt, dx, scheme, boundary, line_scale)
    Fy = hybrid_flux_2d_sweep(f, Vy, "y", params_y, dt, dy, scheme, boundary, line_scale)
    return -(Fx[:, 1:] - Fx[:, :-1]) / dx - (Fy[1:, :] - Fy[:-1, :]) / dy


def hybrid_flux_2d_sweep(
    f,
    V,
    axis: str,
    params: Optional[HybridParams],
    dt: float,
    d: float,
    scheme=SchemeKind.HYBRID,
    boundary: str = "periodic",
    line_scale: bool = True,
) -> np.ndarray:
    """Mass flux ``V * f_face`` through every interface normal to ``axis``.

    The smoothness indicator runs along each grid line of the sweep. Its scale
    ``D`` is the range of that line (``line_scale=True``) or of the whole
    2D field.
    """
    f = np.asarray(f, dtype=float)
    if axis == "x":
        flux = line_fluxes(f, V, 2.0 * dt / d, scheme, boundary, d, params, line_scale)
        return V * flux
    if axis == "y":
        flux = line_fluxes(f.T, np.asarray(V).T, 2.0 * dt / d, scheme, boundary, d, params, line_scale)
        return (np.asarray(V).T * flux).T
    raise ConfigurationError(f"axis must be 'x' or 'y', got {axis!r}")


def ssprk3_step(u, dt: float, residual: Callable):
    """One Shu-Osher SSP-RK3 step of ``u' = residual(u)``."""
    u = np.asarray(u, dtype=float)
    # increment form of the Shu-Osher stages; fewer roundoff-level wiggles
    # on plateaus than the convex-combination form
    k0 = residual(u)
    k1 = residual(u + dt * k0)
    k2 = residual(u + 0.25 * dt * (k0 + k1))
    return u + dt * ((k0 + k1) + 4.0 * k2) / 6.0


@dataclass(frozen=True)
class StepControl:
    mode: str = "cfl-target"
    cfl: float = 0.2
    dt: Optional[float] = None
    t_end: float = 1.0

    def __post_init__(self):
        if self.mode not in ("cfl-target", "fixed-dt"):
            raise ConfigurationError(f"unknown step mode {self.mode!r}")
        if self.mode == "cfl-target" and not (0.0 < self.cfl <= 1.0):
            raise ConfigurationError("cfl must lie in (0, 1]")
        if self.mode == "fixed-dt" and not (self.dt is not None and self.dt > 0.0):
            raise ConfigurationError("fixed-dt mode needs a positive dt")
        if self.t_end < 0.0:
            raise ConfigurationError("t_end must be non-negative")


def max_courant(dt: float, spacings, speeds) -> float:
    return max(dt * s / h for h, s in zip(spacings, speeds))


def compute_dt(control: StepControl, spacings, speeds, t: float = 0.0) -> float:
    """Step size for the next step starting at ``t``.

    ``spacings`` and ``speeds`` are per-axis cell widths and ``max|V|``.
    The returned step never overshoots ``control.t_end``.
    """
    spacings = np.atleast_1d(np.asarray(spacings, dtype=float))
    speeds = np.atleast_1d(np.asarray(speeds, dtype=float))
    remaining = control.t_end - t
    if remaining <= 0.0:
        return 0.0
    if control.mode == "cfl-target":
        moving = speeds > 0.0
        if not np.any(moving):
            return remaining
        dt = control.cfl * float(np.min(spacings[moving] / speeds[moving]))
    else:
        dt = float(control.dt)
        if max_courant(dt, spacings, speeds) > 1.0 + CFL_TOL:
            raise StabilityError(
                f"fixed dt={dt} gives CFL {max_courant(dt, spacings, speeds):.4g} > 1"
            )
    # land exactly on t_end; absorb a sliver of roundoff into the last step
    if t + dt >= control.t_end - 1e-12 * max(1.0, abs(control.t_end)):
        dt = remaining
    return dt


@dataclass
class AdvectionResult:
    field: "CellField"
    t: float
    steps: int
    snapshots: dict
    max_courant: float


def _snapshot_schedule(times, t_end):
    return sorted(float(s) for s in times if 0.0 <= s <= t_end)


def advect_1d(
    initial,
    velocity: Callable,
    control: StepControl,
    scheme,
    params: Optional[HybridParams] = None,
    boundary: str = "periodic",
    snapshot_times=(),
) -> AdvectionResult:
    """Integrate ``f_t + (V f)_x = 0`` from the cell field ``initial`` to ``control.t_end``.

    ``velocity(t, x)`` is sampled at the interfaces at the start of every step
    and frozen over its RK stages.
    """
    from .grid import sample_interface_velocity

    grid = initial.grid
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.HYBRID and params is None:
        params = HybridParams(domain_length=grid.length)
    f = initial.values.copy()
    t, steps, worst = 0.0, 0, 0.0
    pending = _snapshot_schedule(snapshot_times, control.t_end)
    snaps = {}
    while pending and pending[0] <= 0.0:
        snaps[pending.pop(0)] = f.copy()
    while t < control.t_end:
        V = sample_interface_velocity(velocity, grid, t)
        vmax = float(np.max(np.abs(V)))
        stop = min(control.t_end, pending[0]) if pending else control.t_end
        dt = compute_dt(StepControl(control.mode, control.cfl, control.dt, stop), [grid.dx], [vmax], t)
        if dt <= 0.0:
            break
        worst = max(worst, dt * vmax / grid.dx)
        try:
            f = ssprk3_step(f, dt, lambda u: spatial_residual(u, V, grid.dx, scheme, dt, boundary, params))
        except StabilityError as exc:
            raise StabilityError(str(exc), step=steps) from None
        t = stop if dt == stop - t else t + dt
        steps += 1
        while pending and pending[0] <= t + 1e-12:
            snaps[pending.pop(0)] = f.copy()
    return AdvectionResult(initial.with_values(f), t, steps, snaps, worst)


def advect_2d(
    initial,
    velocity: Callable,
    control: StepControl,
    scheme,
    alpha: float = 0.75,
    snapshot_times=(),
    line_scale: bool = True,
) -> AdvectionResult:
    """Integrate ``f_t + (Vx f)_x + (Vy f)_y = 0`` on a periodic ``Grid2D`` field.

    ``velocity(x, y)`` is steady; each component is sampled at the midpoints of
    the faces normal to it. ``line_scale`` selects the detector scale (see
    :func:`hybrid_flux_2d_sweep`).
    """
    grid = initial.grid
    scheme = SchemeKind.parse(scheme)
    gx, gy = grid.x, grid.y
    Vx = velocity(gx.interfaces[None, :], gy.centers[:, None])[0] * np.ones((gy.n_cells, gx.n_interfaces))
    Vy = velocity(gx.centers[None, :], gy.interfaces[:, None])[1] * np.ones((gy.n_interfaces, gx.n_cells))
    px = HybridParams(alpha, gx.length)
    py = HybridParams(alpha, gy.length)
    speeds = [float(np.max(np.abs(Vx))), float(np.max(np.abs(Vy)))]
    f = initial.values.copy()
    t, steps, worst = 0.0, 0, 0.0
    pending = _snapshot_schedule(snapshot_times, control.t_end)
    snaps = {}
    while pending and pending[0] <= 0.0:
        snaps[pending.pop(0)] = f.copy()
    while t < control.t_end:
        stop = min(control.t_end, pending[0]) if pending else control.t_end
        dt = compute_dt(StepControl(control.mode, control.cfl, control.dt, stop), [gx.dx, gy.dx], speeds, t)
        if dt <= 0.0:
            break
        worst = max(worst, max_courant(dt, [gx.dx, gy.dx], speeds))

        def rhs(u):
            return spatial_residual_2d(u, Vx, Vy, gx.dx, gy.dx, scheme, dt, px, py, line_scale=line_scale)

        try:
            f = ssprk3_step(f, dt, rhs)
        except StabilityError as exc:
            raise StabilityError(str(exc), step=steps) from None
        t = stop if dt == stop - t else t + dt
        steps += 1
        while pending and pending[0] <= t + 1e-12:
            snaps[pending.pop(0)] = f.copy()
    return AdvectionResult(initial.with_values(f), t, steps, snaps, worst)
