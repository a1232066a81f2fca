"""Hybrid anti-dissipative / WENO5 finite-volume solvers for linear transport.

The package advances ``f_t + div(V f) = 0`` with a flux that blends a
downwind-biased, clamped anti-dissipative flux with a fifth-order WENO flux,
switching by a local smoothness indicator. Lifshitz-Slyozov growth models
(homogeneous and space-dependent) are built on the same kernels.
"""
from .detector import DEFAULT_ALPHA, HybridParams, HybridWeights, SmoothnessField, hybrid_weights, smoothness_cellwise
from .diagnostics import convergence_order, front_width, l1_error, total_mass_ls, total_variation
from .errors import ConfigurationError, HybridFVError, InvariantViolation, NumericalError, StabilityError
from .grid import CellField, Grid1D, Grid2D, build_grid_2d, build_uniform_grid, init_cell_averages, init_cell_averages_2d
from .integrator import SchemeKind, StepControl, advect_1d, advect_2d, spatial_residual, ssprk3_step
from .kernels import FluxBounds, adm_flux, flux_bounds, weno5_reconstruct
from .problems import PROBLEMS, get_problem

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ALPHA",
    "HybridParams",
    "HybridWeights",
    "SmoothnessField",
    "hybrid_weights",
    "smoothness_cellwise",
    "convergence_order",
    "front_width",
    "l1_error",
    "total_mass_ls",
    "total_variation",
    "ConfigurationError",
    "HybridFVError",
    "InvariantViolation",
    "NumericalError",
    "StabilityError",
    "CellField",
    "Grid1D",
    "Grid2D",
    "build_grid_2d",
    "build_uniform_grid",
    "init_cell_averages",
    "init_cell_averages_2d",
    "SchemeKind",
    "StepControl",
    "advect_1d",
    "advect_2d",
    "spatial_residual",
    "ssprk3_step",
    "FluxBounds",
    "adm_flux",
    "flux_bounds",
    "weno5_reconstruct",
    "PROBLEMS",
    "get_problem",
]
