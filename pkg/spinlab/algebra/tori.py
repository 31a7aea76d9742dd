"""
Norm-one tori T_t(Q) = {x + y sqrt(-t) : x^2 + t y^2 = 1}.

t is any positive integer; its squarefree part r decides how primes split and
t = s^2 r only rescales y. Completions are never built as objects: a split
prime is seen through a trivialization rho_p into (Z/p^k)^x and through the
torus valuation.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import PreconditionError, VerificationError
from .arith import (
    crt,
    factor,
    format_rational,
    legendre,
    mod_rational,
    odd_part,
    parse_rational,
    require_odd_prime,
    sqrt_mod,
    squarefree_part,
    symmetric_residue,
    to_rational,
    val,
)

# Set up logger
logger = logging.getLogger(__name__)

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


@lru_cache(maxsize=1024)
def square_split(t: int) -> Tuple[int, int]:
    """(r, s) with t = s^2 r and r squarefree."""
    r = squarefree_part(t)
    return r, math.isqrt(t // r)


def _check_parameter(t: Any) -> int:
    if not isinstance(t, int) or isinstance(t, bool) or t < 1:
        raise PreconditionError(f"Torus parameter must be a positive integer, got {t!r}")
    return t


@dataclass(frozen=True)
class TorusElem:
    """Element x + y sqrt(-t) of T_t(Q)."""

    t: int
    x: Fraction
    y: Fraction

    def __post_init__(self):
        _check_parameter(self.t)
        object.__setattr__(self, "x", to_rational(self.x))
        object.__setattr__(self, "y", to_rational(self.y))
        if self.x * self.x + self.t * self.y * self.y != 1:
            raise PreconditionError(
                f"({self.x}, {self.y}) is not on x^2 + {self.t} y^2 = 1"
            )

    @classmethod
    def identity(cls, t: int) -> "TorusElem":
        return cls(t, Fraction(1), Fraction(0))

    @property
    def r(self) -> int:
        return square_split(self.t)[0]

    @property
    def s(self) -> int:
        return square_split(self.t)[1]

    def _check_same(self, other: "TorusElem") -> None:
        if self.t != other.t:
            raise PreconditionError(f"Torus parameters differ: {self.t} and {other.t}")

    def __mul__(self, other: "TorusElem") -> "TorusElem":
        if not isinstance(other, TorusElem):
            return NotImplemented
        self._check_same(other)
        return TorusElem(
            self.t,
            self.x * other.x - self.t * self.y * other.y,
            self.x * other.y + other.x * self.y,
        )

    def conj(self) -> "TorusElem":
        return TorusElem(self.t, self.x, -self.y)

    inverse = conj

    def __pow__(self, n: int) -> "TorusElem":
        base = self if n >= 0 else self.conj()
        result = TorusElem.identity(self.t)
        n = abs(n)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.x == 1 and self.y == 0

    def to_dict(self) -> Dict[str, Any]:
        return {"t": self.t, "x": format_rational(self.x), "y": format_rational(self.y)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TorusElem":
        return cls(int(data["t"]), parse_rational(str(data["x"])), parse_rational(str(data["y"])))


def torus_mul(z1: TorusElem, z2: TorusElem) -> TorusElem:
    return z1 * z2


def torus_inv(z: TorusElem) -> TorusElem:
    return z.conj()


def gamma() -> TorusElem:
    """(3 + sqrt(-7))/4, a norm-one unit of Z[1/2][sqrt(-7)]."""
    return TorusElem(7, Fraction(3, 4), Fraction(1, 4))


def is_unit_in_order(z: TorusElem) -> bool:
    """Whether z and z^-1 both have coordinates in Z[1/2]."""
    return all(odd_part(c.denominator) == 1 for c in (z.x, z.y))


# ---------------------------------------------------------------------------
# Primes and trivializations
# ---------------------------------------------------------------------------

def splitting_type(t: int, p: int) -> str:
    """How the odd prime p behaves in Q(sqrt(-t))."""
    require_odd_prime(p)
    r, _ = square_split(_check_parameter(t))
    if r % p == 0:
        return RAMIFIED
    return SPLIT if legendre(-r, p) == 1 else INERT


@dataclass(frozen=True)
class Trivialization:
    """A square root zeta of -t modulo p^k."""

    t: int
    p: int
    k: int
    zeta: int

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.k < 1:
            raise PreconditionError(f"Precision must be positive, got {self.k}")
        if (self.zeta * self.zeta + self.t) % self.modulus:
            raise PreconditionError(f"{self.zeta}^2 + {self.t} is not 0 mod {self.p}^{self.k}")
        if splitting_type(self.t, self.p) != SPLIT:
            raise PreconditionError(f"{self.p} does not split for t = {self.t}")

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def to_dict(self) -> Dict[str, int]:
        return {"t": self.t, "p": self.p, "k": self.k, "zeta": self.zeta}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Trivialization":
        return cls(int(data["t"]), int(data["p"]), int(data["k"]), int(data["zeta"]))


def trivialize(t: int, p: int, k: int = 1) -> Optional[Trivialization]:
    """Canonical trivialization at p, or None when p is inert or divides t."""
    if p == 2:
        raise PreconditionError("2 is invertible in Z[1/2]; no trivialization at 2")
    require_odd_prime(p)
    _check_parameter(t)
    if t % p == 0:
        logger.info(f"No trivialization of T_{t} at {p}: {p} divides t")
        return None
    zeta = sqrt_mod(-t, p, k)
    if zeta is None:
        logger.debug(f"{p} is inert for t = {t}")
        return None
    return Trivialization(t, p, k, zeta)


# ---------------------------------------------------------------------------
# Valuations and rho
# ---------------------------------------------------------------------------

def is_integral_at(z: TorusElem, p: int) -> bool:
    """Whether z lies in T_t(Z_p), i.e. x and s*y are p-integral."""
    return val(z.x, p) >= 0 and val(z.s * z.y, p) >= 0


def _residue_val(n: int, p: int, cap: int) -> int:
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


def torus_val(z: TorusElem, p: int) -> int:
    """min(val_P(z), -val_P(z)) at a prime P above p; 0 unless p splits."""
    if splitting_type(z.t, p) != SPLIT:
        return 0
    scaled_y = z.s * z.y
    e = min(val(z.x, p), val(scaled_y, p))
    if e >= 0:
        return 0

    # X + Y sqrt(-r) = p^-e z has coprime p-integral coordinates
    precision = -2 * e + 1
    modulus = p**precision
    zeta = sqrt_mod(-z.r, p, precision)
    big_x = z.x / Fraction(p) ** e
    big_y = scaled_y / Fraction(p) ** e
    image = (mod_rational(big_x, modulus) + mod_rational(big_y, modulus) * zeta) % modulus
    plus = _residue_val(image, p, precision)
    return -abs(plus + e)


def support(z: TorusElem) -> List[int]:
    """Sorted odd primes q with torus_val(z, q) < 0."""
    denominators = odd_part(z.x.denominator) * odd_part((z.s * z.y).denominator)
    if denominators == 1:
        return []
    return sorted(q for q in factor(denominators) if torus_val(z, q) < 0)


def rho_apply(z: TorusElem, triv: Trivialization) -> int:
    """(x + y zeta) mod p^k for z integral at p."""
    if z.t != triv.t:
        raise PreconditionError(f"Torus parameter {z.t} does not match trivialization {triv.t}")
    if val(z.x, triv.p) < 0 or val(z.y, triv.p) < 0:
        raise PreconditionError(
            f"Torus element is not integral at {triv.p}",
            {"p": triv.p, "torus_val": torus_val(z, triv.p)},
        )
    m = triv.modulus
    return (mod_rational(z.x, m) + mod_rational(z.y, m) * triv.zeta) % m


def conic_point(t: int, u: Any) -> TorusElem:
    """((1 - t u^2)/(1 + t u^2), 2u/(1 + t u^2)); rho maps it to (1 + zeta u)/(1 - zeta u)."""
    u = to_rational(u)
    denom = 1 + t * u * u
    if denom == 0:
        raise PreconditionError(f"1 + {t} u^2 vanishes at u = {u}")
    return TorusElem(t, (1 - t * u * u) / denom, 2 * u / denom)


# ---------------------------------------------------------------------------
# Weak approximation
# ---------------------------------------------------------------------------

@dataclass
class TorusConstraint:
    """rho_p(z) * target^-1 = 1 mod p^precision."""

    p: int
    target: Fraction
    precision: int

    def __post_init__(self):
        self.target = to_rational(self.target)
        if self.precision < 1:
            raise PreconditionError(f"Precision must be positive, got {self.precision}")
        if self.target == 0 or val(self.target, self.p) != 0:
            raise PreconditionError(f"Target {self.target} is not a unit at {self.p}")


@dataclass
class TorusApproximation:
    """Output of weak_approx_torus: the element, its parameter and support."""

    z: TorusElem
    u: Fraction
    trivializations: List[Trivialization] = field(default_factory=list)
    support: List[int] = field(default_factory=list)
    overlaps_with_t: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "z": self.z.to_dict(),
            "u": format_rational(self.u),
            "trivializations": [tr.to_dict() for tr in self.trivializations],
            "support": list(self.support),
            "overlaps_with_t": list(self.overlaps_with_t),
        }


def _as_constraint(item: Any) -> TorusConstraint:
    if isinstance(item, TorusConstraint):
        return item
    p, target, precision = item
    return TorusConstraint(p, target, precision)


def weak_approx_torus(
    t: int,
    constraints: Sequence[Any],
    integral_at: Iterable[int] = (),
) -> TorusApproximation:
    """Find z in T_t(Q) with rho_p(z) = a_p mod p^m_p for every constraint.

    The element is conic_point(t, N/D): for each prime the target a is moved
    off -1 if needed, the p-adic parameter (a-1)/(zeta(a+1)) is written with
    denominator p^v, and the numerators are glued by CRT.

    Args:
        t: Torus parameter
        constraints: (p, a_p, m_p) triples or TorusConstraint objects
        integral_at: Further primes where z must be integral

    Returns:
        TorusApproximation with the support of z and its overlap with P(t)
    """
    _check_parameter(t)
    items = [_as_constraint(c) for c in constraints]
    primes = [c.p for c in items]
    if len(set(primes)) != len(primes):
        raise PreconditionError(f"Constraint primes are not distinct: {primes}")

    for q in sorted(set(integral_at) - set(primes)):
        if splitting_type(t, q) == SPLIT and t % q:
            items.append(TorusConstraint(q, Fraction(1), 1))

    trivs: List[Trivialization] = []
    plans: List[Tuple[TorusConstraint, int, int]] = []
    for c in items:
        triv = trivialize(t, c.p, c.precision)
        if triv is None:
            raise PreconditionError(f"{c.p} does not split for t = {t}", {"p": c.p, "t": t})
        trivs.append(triv)
        m = triv.modulus
        a = mod_rational(c.target, m)
        if val(a + 1, c.p) >= c.precision:
            for bump in (1, 2):
                shifted = a * (1 + bump * m) % (m * c.p)
                if val(shifted + 1, c.p) == c.precision:
                    a = shifted
                    break
        v = int(val(a + 1, c.p))
        numerator = a - 1
        denominator = triv.zeta * ((a + 1) // c.p**v)
        plans.append((c, v, numerator * pow(denominator, -1, m) % m))

    big_d = math.prod(c.p**v for c, v, _ in plans)
    pairs = [
        (residue * (big_d // c.p**v) % c.p**c.precision, c.p**c.precision)
        for c, v, residue in plans
    ]
    modulus = math.prod(m for _, m in pairs)
    n = symmetric_residue(crt(pairs), modulus) if pairs else 0
    u = Fraction(n, big_d)
    z = conic_point(t, u)

    for c, triv in zip(items, trivs):
        expected = mod_rational(c.target, triv.modulus)
        if rho_apply(z, triv) != expected:
            raise VerificationError(f"rho_{c.p}(z) does not match the target mod {c.p}^{c.precision}")

    supp = support(z)
    overlaps = [q for q in supp if t % q == 0]
    logger.info(f"Weak approximation on T_{t}: u = {u}, support {supp}")
    return TorusApproximation(z, u, trivs, supp, overlaps)
