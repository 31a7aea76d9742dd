"""
spinlab: exact Clifford and Spin arithmetic, norm-one tori, approximation
certificates, generalized Steinberg symbols and congruence-quotient widths.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    NotSpinError,
    PreconditionError,
    SearchCapExceeded,
    SpinLabError,
    VerificationError,
)

__all__ = [
    "__version__",
    "ConfigError",
    "NotSpinError",
    "PreconditionError",
    "SearchCapExceeded",
    "SpinLabError",
    "VerificationError",
]
