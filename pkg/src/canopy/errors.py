"""Exception hierarchy shared across the package."""


class CanopyError(Exception):
    """Base class for all canopy errors."""


class DomainError(CanopyError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class RangeError(CanopyError, ValueError):
    """A target value is not attained by the curve being inverted."""


class IntegrationError(CanopyError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""


class ValidationError(CanopyError, ValueError):
    """A value violates a domain type's invariants."""


class ParseError(CanopyError, ValueError):
    """An input file could not be parsed.

    Carries the 1-based data row number where the problem was found
    (``None`` for file-level problems such as a bad header).
    """

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class UnderdeterminedError(CanopyError, ValueError):
    """A regression segment does not contain enough points to fit a line."""


class UnknownSpeciesError(CanopyError, ValueError):
    """A wood type or size class name is not one of the known values."""
