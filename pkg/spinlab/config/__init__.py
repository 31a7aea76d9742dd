"""
Configuration settings for the spinlab system.
"""

from .settings import Settings, settings

__all__ = ["Settings", "settings"]
