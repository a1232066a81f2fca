"""Uniform cell-centred grids and cell-averaged fields in one and two dimensions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NumericalError

# 5-point Gauss-Legendre rule on [-1, 1]
_GL5_NODES, _GL5_WEIGHTS = np.polynomial.legendre.leggauss(5)
# weights of the cell mean (sum to one)
_GL5_MEAN_WEIGHTS = _GL5_WEIGHTS / _GL5_WEIGHTS.sum()


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ConfigurationError("grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise ConfigurationError(
                f"grid extent must be positive, got [{self.x_min}, {self.x_max}]"
            )
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be a positive integer, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def n_interfaces(self) -> int:
        return self.n_cells + 1

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.interfaces)


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid; fields are stored with shape ``(ny, nx)`` so x is the fast axis."""

    x: Grid1D
    y: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.y.n_cells, self.x.n_cells)

    @property
    def n_cells(self) -> int:
        return self.x.n_cells * self.y.n_cells


@dataclass(frozen=True, eq=False)
class CellField:
    """Cell averages attached to the grid they live on."""

    grid: Grid1D | Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = (self.grid.n_cells,) if isinstance(self.grid, Grid1D) else self.grid.shape
        if values.shape != expected:
            raise ConfigurationError(f"field shape {values.shape} does not match grid {expected}")
        if not np.all(np.isfinite(values)):
            raise NumericalError("cell field contains non-finite values")
        object.__setattr__(self, "values", values)

    def with_values(self, values) -> "CellField":
        return CellField(self.grid, values)


def build_uniform_grid(x_min: float, x_max: float, n_cells: int) -> Grid1D:
    return Grid1D(float(x_min), float(x_max), int(n_cells))


def build_grid_2d(x_min, x_max, nx, y_min, y_max, ny) -> Grid2D:
    return Grid2D(build_uniform_grid(x_min, x_max, nx), build_uniform_grid(y_min, y_max, ny))


def _gauss5_cell_means(profile, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _GL5_NODES[None, :]
    vals = np.asarray(profile(x), dtype=float)
    return vals @ _GL5_MEAN_WEIGHTS


def init_cell_averages(
    profile: Callable,
    grid: Grid1D,
    quadrature: str = "auto",
) -> CellField:
    """Cell averages of ``profile`` over ``grid``.

    Parameters
    ----------
    profile
        Vectorised callable of the coordinate. It may expose an
        ``antiderivative`` attribute (used by ``"exact-antiderivative"``) and a
        ``breakpoints`` sequence of abscissae where it is not smooth; cells
        containing a breakpoint are split there before the Gauss rule is applied.
    quadrature
        ``"exact-antiderivative"``, ``"gauss-5"`` or ``"auto"`` (antiderivative
        when available, Gauss otherwise).
    """
    antiderivative = getattr(profile, "antiderivative", None)
    if quadrature == "auto":
        quadrature = "exact-antiderivative" if antiderivative is not None else "gauss-5"
    edges = grid.interfaces
    if quadrature == "exact-antiderivative":
        if antiderivative is None:
            raise ConfigurationError("profile has no antiderivative")
        prim = np.asarray(antiderivative(edges), dtype=float)
        return CellField(grid, np.diff(prim) / np.diff(edges))
    if quadrature != "gauss-5":
        raise ConfigurationError(f"unknown quadrature {quadrature!r}")

    breaks = np.asarray(sorted(getattr(profile, "breakpoints", ())), dtype=float)
    breaks = breaks[(breaks > grid.x_min) & (breaks < grid.x_max)]
    # split every cell at the breakpoints it contains
    pieces = np.unique(np.concatenate([edges, breaks]))
    owner = np.clip(np.searchsorted(edges, pieces[:-1], side="right") - 1, 0, grid.n_cells - 1)
    lo, hi = pieces[:-1], pieces[1:]
    integrals = _gauss5_cell_means(profile, lo, hi) * (hi - lo)
    sums = np.bincount(owner, weights=integrals, minlength=grid.n_cells)
    return CellField(grid, sums / np.diff(edges))


def init_cell_averages_2d(profile: Callable, grid: Grid2D, subcells: int = 1) -> CellField:
    """Tensor 5x5 Gauss averages of ``profile(x, y)``, optionally on a refined sub-grid."""
    sub = int(subcells)
    fx = build_uniform_grid(grid.x.x_min, grid.x.x_max, grid.x.n_cells * sub)
    fy = build_uniform_grid(grid.y.x_min, grid.y.x_max, grid.y.n_cells * sub)
    xe, ye = fx.interfaces, fy.interfaces
    xq = (0.5 * (xe[:-1] + xe[1:]))[:, None] + 0.5 * fx.dx * _GL5_NODES[None, :]
    yq = (0.5 * (ye[:-1] + ye[1:]))[:, None] + 0.5 * fy.dx * _GL5_NODES[None, :]
    # shape (ny, 5, nx, 5)
    X = xq[None, None, :, :]
    Y = yq[:, :, None, None]
    vals = np.asarray(profile(X, Y), dtype=float)
    w = _GL5_MEAN_WEIGHTS
    means = np.einsum("a,iajb,b->ij", w, vals, w)
    means = means.reshape(grid.y.n_cells, sub, grid.x.n_cells, sub).mean(axis=(1, 3))
    return CellField(grid, means)


def sample_interface_velocity(V: Callable, grid: Grid1D, t: float = 0.0) -> np.ndarray:
    """Pointwise velocity ``V(t, x)`` at the ``n_cells + 1`` interfaces."""
    vals = np.broadcast_to(np.asarray(V(t, grid.interfaces), dtype=float), (grid.n_interfaces,))
    if not np.all(np.isfinite(vals)):
        raise NumericalError("velocity is not finite at every interface")
    return np.array(vals)
