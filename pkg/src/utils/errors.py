"""Exception hierarchy shared by every micromode-lab module.

Typed outcomes (an absent micromode, a non-real d_n, a censored trajectory)
are reported through result objects, never raised.
"""


# -----------------------------------------------------------------------------
# Exceptions
# -----------------------------------------------------------------------------


class MicromodeError(Exception):
    """Base exception for micromode-lab."""

    pass


class ConfigurationError(MicromodeError, ValueError):
    """Invalid configuration values or study schema."""

    def __init__(self, message: str, keys: list[str] | None = None):
        super().__init__(message)
        self.keys = keys or []


class DomainError(MicromodeError, ValueError):
    """Arguments outside the mathematical domain of an operation."""

    pass


class ShapeError(MicromodeError, ValueError):
    """Dimension mismatch between a model, a dataset and a position."""

    pass


class OrderIndexError(MicromodeError, IndexError):
    """Order-statistic index out of range."""

    pass


class ContractError(MicromodeError, RuntimeError):
    """Operation requires a certified micromode."""

    pass


class UnsupportedDimensionError(MicromodeError, NotImplementedError):
    """Operation is only defined in one dimension."""

    pass


class DataFileError(MicromodeError, OSError):
    """Data file missing, unreadable or malformed."""

    pass
