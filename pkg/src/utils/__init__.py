"""
Utility module.

Common utilities for logging, file handling, reproducible random streams
and the shared exception hierarchy.
"""

from .errors import (
    ConfigurationError,
    ContractError,
    DataFileError,
    DomainError,
    MicromodeError,
    OrderIndexError,
    ShapeError,
    UnsupportedDimensionError,
)
from .files import ensure_dir, file_digest
from .logging import get_logger, setup_logging
from .rng import derive_seed, make_rng

__all__ = [
    "setup_logging",
    "get_logger",
    "ensure_dir",
    "file_digest",
    "make_rng",
    "derive_seed",
    "MicromodeError",
    "ConfigurationError",
    "DomainError",
    "ShapeError",
    "OrderIndexError",
    "ContractError",
    "UnsupportedDimensionError",
    "DataFileError",
]
