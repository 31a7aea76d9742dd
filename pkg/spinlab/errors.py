"""
Exception hierarchy for the spinlab system.

Library code raises these; the SpinLab facade in main.py turns them into
result dictionaries and the CLI maps them onto exit codes.
"""

from typing import Any, Dict, Optional


class SpinLabError(Exception):
    """Base class for every error raised by spinlab."""

    error_type = "spinlab_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert the error to dictionary format."""
        return {
            "error": str(self),
            "error_type": self.error_type,
            "details": self.details,
        }


class PreconditionError(SpinLabError, ValueError):
    """An operation was called outside its domain."""

    error_type = "precondition"


class NotSpinError(PreconditionError):
    """A multivector failed Spin membership where a Spin element was required."""

    error_type = "not_spin"


class ConfigError(SpinLabError, ValueError):
    """Settings or run configuration failed validation."""

    error_type = "config"


class SearchCapExceeded(SpinLabError, RuntimeError):
    """A bounded search ran past its cap without finding a witness."""

    error_type = "cap_exceeded"


class VerificationError(SpinLabError, RuntimeError):
    """A post-condition or certificate check did not hold."""

    error_type = "verification"
