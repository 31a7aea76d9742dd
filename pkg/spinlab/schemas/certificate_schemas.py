"""
Schema definitions for approximation certificates.

Rationals are stored as "num/den" strings so that certificates can be
re-checked without trusting any float conversion.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class TorusRecord(BaseModel):
    """Schema for an element x + y sqrt(-t) of a norm-one torus."""

    t: int
    x: str
    y: str


class TrivializationRecord(BaseModel):
    """Schema for a square root zeta of -t modulo p^k."""

    t: int
    p: int
    k: int
    zeta: int


class CongruenceRecord(BaseModel):
    """Schema for one congruence rho_p(torus) = target mod p^k."""

    torus: str
    p: int
    k: int
    lhs: int
    rhs: int
    target: str


class ApproxCertificate(BaseModel):
    """Schema for the output of approx unit / approx pair."""

    kind: str  # unit, pair
    targets: List[str]
    ideal: int
    t: int
    trivializations: List[TrivializationRecord] = []
    tori: Dict[str, TorusRecord] = {}
    congruences: List[CongruenceRecord] = []
    supports: Dict[str, List[int]] = {}
    integral_everywhere: bool = False
    notes: List[str] = []


class IntegralityRecord(BaseModel):
    """Schema for the integrality of both torus factors at one prime."""

    p: int
    splitting: str  # split, inert, ramified
    z1_integral: bool
    z2_integral: bool


class SpinPairRecord(BaseModel):
    """Schema for a commuting pair of Spin elements built from two torus elements."""

    t: int
    dim: int
    z1: TorusRecord
    z2: TorusRecord
    v: List[List[str]]
    u: List[List[str]]
    g1: List[Dict[str, Any]]
    g2: List[Dict[str, Any]]
    commute: bool
    integrality: List[IntegralityRecord] = []
    approx: Optional[ApproxCertificate] = None
