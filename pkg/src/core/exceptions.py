"""Custom exceptions for the claims benchmarking toolkit.

Every error carries an ``exit_code`` so the CLI can map failures onto the
documented process exit statuses: 2 input/schema, 3 invariant, 4 numerical.
"""

from typing import Any


class ClaimsBenchError(Exception):
    """Base exception for all claims benchmarking errors."""

    exit_code: int = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.stage: str | None = None

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ConfigurationError(ClaimsBenchError):
    """Raised when configuration is invalid or missing."""

    exit_code = 2


class IngestionError(ClaimsBenchError):
    """Raised when an input table cannot be read."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        path: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.path = path


class EmptyFileError(IngestionError):
    """Raised when an input table holds no data rows."""


class SchemaMismatchError(IngestionError):
    """Raised when a table's header disagrees with its schema."""


class InvariantError(ClaimsBenchError):
    """Raised when data violates a domain invariant."""

    exit_code = 3


class MalformedRowError(InvariantError):
    """Raised when a single row fails validation."""

    def __init__(
        self,
        message: str,
        row: int,
        field: str | None = None,
        path: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.row = row
        self.field = field
        self.path = path


class InvalidTraceError(InvariantError):
    """Raised when engagement intervals overlap or are unsorted."""


class VmtInputError(InvariantError):
    """Raised when VMT input rows are incomplete or inconsistent."""


class MissingVmtYearError(InvariantError):
    """Raised when an exposure year has no VMT estimate."""

    def __init__(
        self,
        message: str,
        region: str,
        year: int,
        scope: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.region = region
        self.year = year
        self.scope = scope


class WeightSumInvalidError(InvariantError):
    """Raised when mixture weights are negative or do not sum to one."""


class ZeroExposureError(InvariantError):
    """Raised when a region has no exposure to divide by."""


class ZeroMileageError(InvariantError):
    """Raised when a fleet category has no miles."""


class MissingRegionError(InvariantError):
    """Raised when a weighted region has no frequency estimate."""


class BaselineZeroError(InvariantError):
    """Raised when a percent reduction is requested against a zero baseline."""


class ConfidenceMismatchError(InvariantError):
    """Raised when two estimates with different confidence levels are compared."""


class NumericalError(ClaimsBenchError):
    """Raised when a numerical routine fails."""

    exit_code = 4


class NoConvergenceError(NumericalError):
    """Raised when root-finding stops before reaching its tolerance."""

    def __init__(
        self,
        message: str,
        residual: float,
        iterations: int,
        details: dict[str, Any] | None = None,
    ) -> None:
        super().__init__(message, details)
        self.residual = residual
        self.iterations = iterations


class MatrixCellError(ClaimsBenchError):
    """Raised when one category x coverage cell of the matrix fails."""

    def __init__(
        self,
        message: str,
        category: str,
        coverage: str,
        cause: ClaimsBenchError,
    ) -> None:
        super().__init__(message, {"category": category, "coverage": coverage})
        self.category = category
        self.coverage = coverage
        self.cause = cause
        self.exit_code = cause.exit_code
