"""Configuration module for the halting-time laboratory."""

from .settings import Settings, get_settings
from .presets import PRESETS, REFERENCE_ROWS

__all__ = ["Settings", "get_settings", "PRESETS", "REFERENCE_ROWS"]
