"""Exception hierarchy for the value model and its tooling.

Every error raised on purpose by this package derives from ValueModelError,
so callers (and the CLI exit-code mapping) can distinguish deliberate
rejections from genuine bugs.
"""

from __future__ import annotations


class ValueModelError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ValueModelError):
    """An input value is outside its declared domain or not finite."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(ValueModelError):
    """An operation is undefined for the given (otherwise valid) inputs."""


class UsageError(ValueModelError):
    """The caller violated an API contract (shapes, ordering, names)."""


class ConfigurationError(ValueModelError):
    """A configuration object is internally inconsistent."""


class SchemaError(ValueModelError):
    """A dataset stream violates its schema.

    Carries enough context (row, column) to locate the offending cell.
    """

    def __init__(self, message: str, row: int | None = None,
                 column: str | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class DegenerateInputError(ValueModelError):
    """Statistically degenerate input (zero variance, empty group, ...)."""


class SingularDesignError(ValueModelError):
    """Regression design is rank-deficient."""

    def __init__(self, columns: list[str]):
        self.columns = columns
        super().__init__(
            "design is rank-deficient; dependent column(s): "
            + ", ".join(columns))


class ConvergenceError(ValueModelError):
    """An iterative numeric method did not converge."""

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")


class ConsistencyError(ValueModelError):
    """A pairwise-comparison matrix is too inconsistent to trust."""

    def __init__(self, consistency_ratio: float):
        self.consistency_ratio = consistency_ratio
        super().__init__(
            f"consistency ratio {consistency_ratio:.4f} exceeds the 0.10 "
            "acceptance cutoff; pass override to use the weights anyway")


class ResourceLimitError(ValueModelError):
    """A requested computation exceeds a hard resource budget."""

    def __init__(self, message: str, count: int):
        self.count = count
        super().__init__(f"{message} ({count} requested)")


class IntegrityError(ValueModelError):
    """A result object no longer satisfies its own invariants."""


class CapabilityError(ValueModelError):
    """The dataset lacks the structure this operation needs."""


class FormatError(ValueModelError):
    """The requested output format cannot represent this object."""
