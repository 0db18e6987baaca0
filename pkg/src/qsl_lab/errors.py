"""Exception types raised across the package."""

from __future__ import annotations


class QslLabError(Exception):
    """Base class for all package-specific errors."""


class NonHermitianError(QslLabError):
    """A matrix required to be Hermitian is not, beyond tolerance."""

    def __init__(self, message: str, max_asymmetry: float):
        super().__init__(f"{message} (max |M - M^dagger| element = {max_asymmetry:.3e})")
        self.max_asymmetry = max_asymmetry


class DimensionMismatchError(QslLabError):
    """Operands live on incompatible spaces or have inconsistent shapes."""


class DimensionCapError(QslLabError):
    """A tensor-product dimension would exceed the configured cap."""


class EigensolverError(QslLabError):
    """The Jacobi eigensolver failed to converge or produced an invalid result."""


class NormalizationError(QslLabError):
    """A state vector violated its normalization contract."""


class StepSizeError(QslLabError):
    """An integrator step size violates the stability rule."""


class PositivityError(QslLabError):
    """A density matrix lost positivity or trace beyond tolerance."""


class SeriesFormatError(QslLabError):
    """A tabulated time series file is malformed."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConfigError(QslLabError):
    """A scenario configuration is invalid or incomplete."""
