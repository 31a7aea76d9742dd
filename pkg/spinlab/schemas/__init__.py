"""
Schema definitions for spinlab certificates, reports and runs.
"""

from .certificate_schemas import (
    ApproxCertificate,
    CongruenceRecord,
    IntegralityRecord,
    SpinPairRecord,
    TorusRecord,
    TrivializationRecord,
)
from .report_schemas import CheckTally, SuiteReport, VerificationResult, WidthReport
from .run_schemas import RunConfig

__all__ = [
    "ApproxCertificate",
    "CongruenceRecord",
    "IntegralityRecord",
    "SpinPairRecord",
    "TorusRecord",
    "TrivializationRecord",
    "CheckTally",
    "SuiteReport",
    "VerificationResult",
    "WidthReport",
    "RunConfig",
]
