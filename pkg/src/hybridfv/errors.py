"""Exception types shared across the solver."""


class HybridFVError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(HybridFVError, ValueError):
    """Invalid grid, parameter or run configuration."""


class StabilityError(HybridFVError, RuntimeError):
    """A time step violates the CFL restriction."""

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


class NumericalError(HybridFVError, ArithmeticError):
    """Non-finite input where a finite value is required."""


class InvariantViolation(HybridFVError, AssertionError):
    """An internal invariant (e.g. a non-empty flux interval) failed."""
