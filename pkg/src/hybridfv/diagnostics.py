"""Error norms, convergence orders, total variation, LS mass and front widths."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .grid import CellField, Grid1D, Grid2D


@dataclass(frozen=True)
class ErrorReport:
    """Summary of one run against its reference.

    ``tv_error`` is signed: ``TV(numerical) - TV(reference)``.
    """

    l1: float
    order: Optional[float] = None
    tv_error: Optional[float] = None
    mass_drift: Optional[float] = None


def _cell_volume(grid) -> float:
    if isinstance(grid, Grid2D):
        return grid.x.dx * grid.y.dx
    return grid.dx


def l1_error(a: CellField, b: CellField) -> float:
    """Discrete L1 distance ``sum |a_i - b_i| * dx`` (``dx * dy`` in 2D).

    Raises
    ------
    ConfigurationError
        If the fields live on different grids.
    """
    if a.grid != b.grid:
        raise ConfigurationError("l1_error: fields live on different grids")
    return float(np.sum(np.abs(a.values - b.values)) * _cell_volume(a.grid))


def convergence_order(e_coarse: float, e_fine: float, factor: float = 2.0) -> float:
    """Observed order ``log(e_coarse / e_fine) / log(factor)``; ``nan`` if undefined."""
    if not (e_coarse > 0.0 and e_fine > 0.0) or not (math.isfinite(e_coarse) and math.isfinite(e_fine)):
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(factor)


def total_variation(field, periodic: bool = True) -> float:
    """``sum |f_{i+1} - f_i|``, including the wrap-around jump when ``periodic``.

    Accepts a :class:`CellField` or a plain 1D array.
    """
    f = np.asarray(field.values if isinstance(field, CellField) else field, dtype=float)
    if f.ndim != 1:
        raise ConfigurationError("total_variation expects a 1D field")
    if f.size < 2:
        raise ConfigurationError("total_variation needs at least 2 cells")
    tv = float(np.sum(np.abs(np.diff(f))))
    if periodic:
        tv += abs(float(f[0] - f[-1]))
    return tv


def tv_error(numerical, reference, periodic: bool = True) -> float:
    """Signed total-variation defect of ``numerical`` relative to ``reference``."""
    return total_variation(numerical, periodic) - total_variation(reference, periodic)


def total_mass_ls(state) -> float:
    """``c + int xi f`` (homogeneous) or ``sum_x (c + int xi f) dx`` (space-dependent)."""
    from .lifshitz import HomogeneousState, total_mass_homogeneous, total_mass_nonhomogeneous

    if isinstance(state, HomogeneousState):
        return total_mass_homogeneous(state)
    return total_mass_nonhomogeneous(state)


def relative_drift(initial: float, current: float, scale: Optional[float] = None) -> float:
    """``|current - initial| / scale``; ``scale`` defaults to ``|initial|`` (1 if that is 0).

    Pass an explicit scale, e.g. the L1 mass, for signed data whose net mass
    vanishes.
    """
    if scale is None:
        scale = abs(initial)
    scale = scale if scale > 0.0 else 1.0
    return abs(current - initial) / scale


def front_width(field, lo_frac: float = 0.1, hi_frac: float = 0.9) -> Optional[int]:
    """Cells spanned by the rightmost descent from ``hi_frac * max`` to ``lo_frac * max``.

    Counts the cells strictly between the last cell with ``f >= hi_frac * max``
    and the first later cell with ``f <= lo_frac * max``. Returns ``None`` when
    there is no such descent (e.g. a constant field).

    Examples
    --------
    >>> front_width(np.array([1.0, 1.0, 0.0, 0.0]))
    0
    """
    if not 0.0 < lo_frac < hi_frac < 1.0:
        raise ConfigurationError("need 0 < lo_frac < hi_frac < 1")
    f = np.asarray(field.values if isinstance(field, CellField) else field, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ConfigurationError("front_width expects a non-empty 1D field")
    peak = float(np.max(f))
    if not peak > 0.0:
        return None
    high = np.flatnonzero(f >= hi_frac * peak)
    last_high = int(high[-1])
    low = np.flatnonzero(f[last_high + 1 :] <= lo_frac * peak)
    if low.size == 0:
        return None
    return int(low[0])


def running_max_excess(history) -> float:
    """Largest amount by which ``max f`` of a snapshot exceeds the maximum of all earlier ones.

    Zero when the peak value never grows along the sequence.
    """
    peaks = np.array([float(np.max(np.asarray(h))) for h in history])
    if peaks.size < 2:
        return 0.0
    earlier = np.maximum.accumulate(peaks)[:-1]
    return float(max(0.0, np.max(peaks[1:] - earlier)))


def segment(field: CellField, lo: float, hi: float) -> np.ndarray:
    """Values of the cells whose centres lie in ``[lo, hi]`` (1D)."""
    if not isinstance(field.grid, Grid1D):
        raise ConfigurationError("segment is defined for 1D fields")
    x = field.grid.centers
    return field.values[(x >= lo) & (x <= hi)]
