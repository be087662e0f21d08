"""
errors.py

Exception types raised across the tcqeve package.

The CLI maps every user-facing error below to exit code 2; anything else
escaping a command is treated as an internal error (exit code 1).
"""

from typing import Optional


class TcqeveError(Exception):
    """Base class for all package errors."""


class HamiltonianParseError(TcqeveError, ValueError):
    """Malformed record in an integral file."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(TcqeveError, ValueError):
    """Input parsed but violates a model invariant."""


class CapacityError(TcqeveError):
    """Requested size exceeds a configured qubit or degree cap."""


class ConfigurationError(TcqeveError):
    """Missing or inconsistent run configuration."""


class NoRealSpectrumError(TcqeveError):
    """Every eigenvalue has an imaginary part above the reality tolerance."""


class RescaleRequiredError(TcqeveError):
    """Scaled operator norm exceeds 1/2; use effective_alpha first."""


class LinearSolveError(TcqeveError):
    """Denominator system is singular to working precision."""

    def __init__(self, message: str, condition_estimate: float = float("inf")):
        self.condition_estimate = condition_estimate
        super().__init__(f"{message} (estimated condition number {condition_estimate:.3e})")


class BoundViolationError(TcqeveError):
    """A numerically checked bound failed."""

    def __init__(self, message: str, table=None):
        self.table = table
        super().__init__(message)


class NearDefectiveWarning(UserWarning):
    """Eigenvector matrix is badly conditioned."""


class ReproductionDriftWarning(UserWarning):
    """Reproduced table entry outside its acceptance tolerance."""


USER_ERRORS = (
    HamiltonianParseError,
    ValidationError,
    CapacityError,
    ConfigurationError,
    NoRealSpectrumError,
    RescaleRequiredError,
)
