"""Discontinuity detector and the convex ADM/WENO flux blend."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

DEFAULT_ALPHA = 0.75
# below this range the field is treated as constant
SCALE_FLOOR = 1e-30


@dataclass(frozen=True)
class HybridParams:
    alpha: float = DEFAULT_ALPHA
    domain_length: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ConfigurationError(f"alpha out of (0,1]: {self.alpha}")
        if not self.domain_length > 0.0:
            raise ConfigurationError("domain_length must be positive")


@dataclass(frozen=True)
class SmoothnessField:
    e: np.ndarray
    D: np.ndarray


@dataclass(frozen=True)
class HybridWeights:
    w_A: np.ndarray
    w_W: np.ndarray


def _pad(values: np.ndarray, width: int, boundary: str) -> np.ndarray:
    pad = [(0, 0)] * (values.ndim - 1) + [(width, width)]
    if boundary == "periodic":
        return np.pad(values, pad, mode="wrap")
    if boundary == "extend-constant":
        return np.pad(values, pad, mode="edge")
    raise ConfigurationError(f"unknown boundary mode {boundary!r}")


def smoothness_cellwise(
    values, boundary: str = "periodic", axis: int = -1, per_line: bool = False
) -> SmoothnessField:
    """Interpolation-error indicator ``e_i = |fhat_i - f_i| / D``.

    ``fhat_i`` is the four-point interpolant from cells ``i-2, i-1, i+1, i+2``
    (exact on cubics). The scale ``D = max f - min f`` is taken over the whole
    array, or over each line along ``axis`` when ``per_line`` is set. A zero
    scale gives ``e = 0``.
    """
    f = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    if f.shape[-1] < 5:
        raise ConfigurationError("smoothness indicator needs at least 5 cells")
    g = _pad(f, 2, boundary)
    fhat = (-g[..., :-4] + 4.0 * g[..., 1:-3] + 4.0 * g[..., 3:-1] - g[..., 4:]) / 6.0
    if per_line:
        D = np.ptp(f, axis=-1, keepdims=True)
    else:
        D = np.asarray(np.ptp(f))
    flat = D < SCALE_FLOOR
    e = np.where(flat, 0.0, np.abs(fhat - f) / np.where(flat, 1.0, D))
    if per_line:
        D = np.moveaxis(D, -1, axis)
    return SmoothnessField(np.moveaxis(e, -1, axis), D)


def interface_smoothness(e_curr, e_next, V):
    """Upwind choice: the left cell's indicator when ``V >= 0``."""
    return np.where(np.asarray(V) >= 0.0, e_curr, e_next)


def hybrid_weights(e, dx: float, params: HybridParams) -> HybridWeights:
    c = (dx / params.domain_length) ** params.alpha
    with np.errstate(under="ignore"):
        w_W = np.exp(-np.square(e) / c)
    return HybridWeights(1.0 - w_W, w_W)


def hybrid_flux(f_A, f_W, w: HybridWeights):
    return w.w_A * f_A + w.w_W * f_W
