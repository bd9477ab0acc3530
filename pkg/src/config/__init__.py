"""
Configuration module.

Handles loading and validation of study configurations.
"""

from .loader import SEED_ENV, ConfigLoader
from .models import StudyConfig, StudyKind

__all__ = [
    "ConfigLoader",
    "StudyConfig",
    "StudyKind",
    "SEED_ENV",
]
