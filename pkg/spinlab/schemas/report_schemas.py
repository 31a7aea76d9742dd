"""
Schema definitions for suite, width and verification reports.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class CheckTally(BaseModel):
    """Pass/fail counts of one identity."""

    name: str
    passed: int = 0
    failed: int = 0


class SuiteReport(BaseModel):
    """Schema for the result of a verification suite."""

    suite: str
    seed: int
    dim: int
    passed: bool = True
    checks: List[CheckTally] = []
    counterexample: Optional[Dict[str, Any]] = None
    extras: Dict[str, Any] = {}

    def tally(self, name: str) -> CheckTally:
        for check in self.checks:
            if check.name == name:
                return check
        check = CheckTally(name=name)
        self.checks.append(check)
        return check

    def record(self, name: str, ok: bool, counterexample: Optional[Dict[str, Any]] = None) -> bool:
        """Count one outcome; the first failure is kept as the counterexample."""
        check = self.tally(name)
        if ok:
            check.passed += 1
        else:
            check.failed += 1
            if self.passed:
                self.passed = False
                self.counterexample = {"check": name, **(counterexample or {})}
        return ok


class WidthReport(BaseModel):
    """Schema for a conjugacy-width experiment in a finite quotient."""

    form: str
    dim: int
    modulus: int
    element: str
    mode: str  # exact, sampled
    bounds: str = "exact"  # exact, lower (sampled mode)
    group_order: Optional[int] = None
    class_size: Optional[int] = None
    class_size_lower_bound: Optional[int] = None
    subgroup_order: Optional[int] = None
    width: Optional[int] = None
    layers: List[int] = []
    cap: int = 0
    cap_exceeded: bool = False
    verified_samples: int = 0
    spin_convention: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WidthReport":
        return cls.model_validate(data)


class VerificationResult(BaseModel):
    """Schema for an independent certificate re-check."""

    kind: str
    valid: bool
    checks: int = 0
    failures: List[str] = []
