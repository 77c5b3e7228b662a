"""Exception types raised by the solvers."""


class PhonodiffError(Exception):
    """Base class for all package errors."""


class InvalidMaterialError(PhonodiffError, ValueError):
    """Material tables are empty, mismatched, or contain non-positive entries."""


class QuadratureError(PhonodiffError):
    """Velocity quadrature too coarse to certify a required identity."""

    def __init__(self, message: str, defect: float):
        super().__init__(f"{message} (measured defect {defect:.3e})")
        self.defect = defect


class NumericalStructureError(PhonodiffError):
    """The generalized spectrum violates a structural assumption."""


class ModeCountError(NumericalStructureError):
    """Non-decaying mode count differs from the odd-basis dimension."""


class SolverError(PhonodiffError):
    """A linear solve failed or left an unacceptable residual."""

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class DegenerateRecoveryError(PhonodiffError):
    """Far-field recovery denominator vanished (e.g. total reflection)."""


class ConvergenceError(PhonodiffError):
    """Fixed-point iteration did not reach tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} "
                         f"after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class ConfigError(PhonodiffError, ValueError):
    """Invalid configuration file or option combination."""
