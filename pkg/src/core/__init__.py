"""Core modules for the claims benchmarking toolkit."""

from src.core.config import Settings, load_settings
from src.core.exceptions import (
    ClaimsBenchError,
    ConfigurationError,
    IngestionError,
    InvariantError,
    NumericalError,
)

__all__ = [
    "Settings",
    "load_settings",
    "ClaimsBenchError",
    "ConfigurationError",
    "IngestionError",
    "InvariantError",
    "NumericalError",
]
