"""Exception types shared across the package.

The CLI maps these onto process exit codes; library callers can catch the
base classes.  Plain ``ValueError`` is reserved for domain violations in the
pure estimator functions (negative generation, factors out of range).
"""


class GridCo2Error(Exception):
    """Base class for package-specific failures."""


class ConfigError(GridCo2Error):
    """A run, method, or registry configuration is invalid or incomplete."""


class DataError(GridCo2Error):
    """Input data failed parsing or validation."""


class ParseError(DataError):
    """A file could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConflictError(DataError):
    """Duplicate rows for the same key disagree on the value."""


class CoverageError(DataError):
    """Missing hours were found and the coverage policy forbids them."""


class AlignmentError(DataError):
    """Two series share no common time buckets."""


class DegenerateVarianceError(GridCo2Error):
    """The long-run variance estimate is not positive."""
