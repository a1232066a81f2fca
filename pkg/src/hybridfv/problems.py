"""Benchmark data: 1D periodic transport profiles and the 2D Zalesak rotation test."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .grid import CellField, Grid1D, init_cell_averages, init_cell_averages_2d


class Profile:
    """Vectorised scalar profile with optional antiderivative and kink/jump locations."""

    def __init__(
        self,
        func: Callable,
        antiderivative: Optional[Callable] = None,
        breakpoints: Sequence[float] = (),
        name: str = "",
    ):
        self.func = func
        self.antiderivative = antiderivative
        self.breakpoints = tuple(breakpoints)
        self.name = name

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def __repr__(self):
        return f"Profile({self.name!r})"


def sin_initial(x):
    return np.sin(np.pi * np.asarray(x, dtype=float))


def step_initial(x):
    x = np.asarray(x, dtype=float)
    return np.where((x >= -1.0) & (x <= 0.0), 1.0, 0.0)


# oscillatory data: Gaussian, box, triangle and ellipse pulses
_Z = -0.7
_DELTA = 0.005
_BETA = np.log(2.0) / (36.0 * _DELTA**2)
_A = 0.5
_ELLIPSE_STEEPNESS = 10.0


def _G(x, z):
    return np.exp(-_BETA * (x - z) ** 2)


def _F(x, a):
    return np.sqrt(np.maximum(1.0 - _ELLIPSE_STEEPNESS**2 * (x - a) ** 2, 0.0))


def oscillatory_initial(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    gauss = (x >= -0.8) & (x <= -0.6)
    box = (x >= -0.4) & (x <= -0.2)
    tri = (x >= 0.0) & (x <= 0.2)
    ell = (x >= 0.4) & (x <= 0.6)
    out = np.where(gauss, (_G(x, _Z - _DELTA) + _G(x, _Z + _DELTA) + 4.0 * _G(x, _Z)) / 6.0, out)
    out = np.where(box, 1.0, out)
    out = np.where(tri, 1.0 - np.abs(10.0 * (x - 0.1)), out)
    out = np.where(ell, (_F(x, _A - _DELTA) + _F(x, _A + _DELTA) + 4.0 * _F(x, _A)) / 6.0, out)
    return out


SIN = Profile(
    sin_initial,
    antiderivative=lambda x: -np.cos(np.pi * np.asarray(x, dtype=float)) / np.pi,
    name="sin",
)
STEP = Profile(
    step_initial,
    antiderivative=lambda x: np.clip(np.asarray(x, dtype=float), -1.0, 0.0) + 1.0,
    breakpoints=(-1.0, 0.0),
    name="step",
)
OSCILLATORY = Profile(
    oscillatory_initial,
    breakpoints=(-0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.4, 0.405, 0.5, 0.595, 0.6),
    name="oscillatory",
)

# Zalesak disk, cone and hump
R0 = 0.3
SLOT_HALF_WIDTH = 0.025
SLOT_TOP = 0.75


def zalesak_initial(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r_disk = np.sqrt(x**2 + (y - 0.5) ** 2)
    r_cone = np.sqrt(x**2 + (y + 0.5) ** 2)
    r_hump = np.sqrt((x + 0.5) ** 2 + y**2)
    disk = (r_disk <= R0) & ((np.abs(x) >= SLOT_HALF_WIDTH) | (y >= SLOT_TOP))
    out = np.zeros(np.broadcast(x, y).shape)
    out = np.where(r_hump <= R0, 0.25 * (1.0 + np.cos(np.pi * r_hump / R0)), out)
    out = np.where(r_cone <= R0, 1.0 - r_cone / R0, out)
    out = np.where(disk, 1.0, out)
    return out


def rotation_velocity(x, y):
    return np.asarray(y, dtype=float), -np.asarray(x, dtype=float)


def unit_velocity(t, x):
    return np.ones_like(np.asarray(x, dtype=float))


def periodic_shift(profile: Profile, t: float, x_min: float, x_max: float) -> Profile:
    """``profile(x - t)`` extended periodically from ``[x_min, x_max]``."""
    L = x_max - x_min

    def shifted(x):
        return profile(x_min + np.mod(np.asarray(x) - t - x_min, L))

    anti = None
    if profile.antiderivative is not None:
        total = profile.antiderivative(x_max) - profile.antiderivative(x_min)

        def anti(x):
            s = np.asarray(x, dtype=float) - t - x_min
            k = np.floor(s / L)
            return k * total + profile.antiderivative(x_min + (s - k * L)) - profile.antiderivative(x_min)

    breaks = [x_min + np.mod(b + t - x_min, L) for b in profile.breakpoints]
    return Profile(shifted, anti, breaks, name=f"{profile.name}(x-{t})")


def exact_transport_solution(profile: Profile, t: float, grid: Grid1D) -> CellField:
    """Cell averages of the unit-speed periodic transport solution at time ``t``."""
    return init_cell_averages(periodic_shift(profile, t, grid.x_min, grid.x_max), grid)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    dims: int
    bounds: tuple
    t_end: float
    boundary: str = "periodic"
    profile: Optional[Profile] = None
    profile_2d: Optional[Callable] = None
    velocity: Optional[Callable] = None
    velocity_2d: Optional[Callable] = None
    meta: dict = field(default_factory=dict)

    def initial_field(self, grid) -> CellField:
        if self.dims == 1:
            return init_cell_averages(self.profile, grid)
        return init_cell_averages_2d(self.profile_2d, grid)

    def exact_field(self, grid, t: Optional[float] = None) -> CellField:
        t = self.t_end if t is None else t
        if self.dims == 1:
            return exact_transport_solution(self.profile, t, grid)
        period = 2.0 * np.pi
        if not np.isclose(np.mod(t, period), 0.0) and not np.isclose(np.mod(t, period), period):
            raise ConfigurationError("2D exact solution only available after whole revolutions")
        return self.initial_field(grid)


PROBLEMS = {
    "transport-sin": ProblemSpec("transport-sin", 1, (-1.0, 1.0), 8.0, profile=SIN, velocity=unit_velocity),
    "transport-step": ProblemSpec("transport-step", 1, (-1.0, 1.0), 8.0, profile=STEP, velocity=unit_velocity),
    "transport-oscillatory": ProblemSpec(
        "transport-oscillatory", 1, (-1.0, 1.0), 8.0, profile=OSCILLATORY, velocity=unit_velocity
    ),
    "rotation-zalesak": ProblemSpec(
        "rotation-zalesak",
        2,
        (-1.0, 1.0, -1.0, 1.0),
        2.0 * np.pi,
        profile_2d=zalesak_initial,
        velocity_2d=rotation_velocity,
    ),
}


def get_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {name!r}; known: {', '.join(sorted(PROBLEMS))}"
        ) from None
