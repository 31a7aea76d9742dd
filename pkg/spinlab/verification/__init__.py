"""
Verification: randomized identity suites and the independent certificate checker.
"""

from .certificates import certificate_kind, verify_certificate
from .suites import SUITES, run_suite

__all__ = [
    "certificate_kind",
    "verify_certificate",
    "SUITES",
    "run_suite",
]
