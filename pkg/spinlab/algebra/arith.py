"""
Exact arithmetic over Q and the ring O = Z[1/2].

Rationals are ``fractions.Fraction`` values. Since 2 is invertible in O, every
nonzero ideal of O has a unique positive odd generator, and ``OIdeal`` stores
exactly that integer. Primality, factorisation and Legendre symbols come from
sympy; the modular square root is Tonelli-Shanks followed by Hensel lifting.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import factorint, isprime
from sympy.ntheory import legendre_symbol

from ..errors import PreconditionError, VerificationError

# Set up logger
logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[Fraction, int, str]
ValOrInf = Union[int, float]
Place = Union[int, str]

INF = math.inf

# Below this bound four_squares uses a deterministic descending search
FOUR_SQUARES_BRUTE_LIMIT = 10**6


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "num/den" string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise PreconditionError(f"Cannot interpret {value!r} as a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise PreconditionError(f"Cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "n", "n/d" or "-n/d" into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise PreconditionError(f"Invalid rational {text!r}: {e}")


def format_rational(value: RationalLike) -> str:
    """Render a rational as "num/den", always with a denominator."""
    r = to_rational(value)
    return f"{r.numerator}/{r.denominator}"


def mod_rational(value: RationalLike, modulus: int) -> int:
    """Reduce a rational modulo an integer; the denominator must be invertible.

    Args:
        value: Rational to reduce
        modulus: Positive modulus

    Returns:
        Least nonnegative residue of numerator * denominator^-1
    """
    r = to_rational(value)
    if math.gcd(r.denominator, modulus) != 1:
        raise PreconditionError(
            f"Denominator {r.denominator} is not invertible modulo {modulus}"
        )
    return (r.numerator * pow(r.denominator, -1, modulus)) % modulus


def symmetric_residue(value: int, modulus: int) -> int:
    """Representative of value mod modulus in (-modulus/2, modulus/2]."""
    value %= modulus
    return value - modulus if 2 * value > modulus else value


# ---------------------------------------------------------------------------
# Primes, squares and valuations
# ---------------------------------------------------------------------------

def require_odd_prime(p: int) -> int:
    """Return p if it is an odd prime, else raise PreconditionError."""
    if not isinstance(p, int) or isinstance(p, bool) or p < 3 or not isprime(p):
        raise PreconditionError(f"{p!r} is not an odd prime")
    return p


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    return legendre_symbol(a % p, p)


def factor(n: int) -> Dict[int, int]:
    """Prime factorisation of |n| as {prime: exponent}."""
    if n == 0:
        raise PreconditionError("Cannot factor zero")
    return {int(p): int(e) for p, e in factorint(abs(n)).items()}


def odd_part(n: int) -> int:
    """|n| with every factor 2 removed."""
    n = abs(n)
    if n == 0:
        raise PreconditionError("Zero has no odd part")
    while n % 2 == 0:
        n //= 2
    return n


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val(r: RationalLike, p: int) -> ValOrInf:
    """The p-adic valuation of a rational, with val(0) = INF."""
    r = to_rational(r)
    if r == 0:
        return INF
    return _int_val(r.numerator, p) - _int_val(r.denominator, p)


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rational_sqrt(r: RationalLike) -> Optional[Fraction]:
    """Nonnegative rational square root of r, or None if r is not a square."""
    r = to_rational(r)
    if r < 0:
        return None
    num, den = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if num * num != r.numerator or den * den != r.denominator:
        return None
    return Fraction(num, den)


def is_square(r: RationalLike) -> bool:
    return rational_sqrt(r) is not None


def squarefree_part(n: int) -> int:
    """Signed squarefree integer in the square class of n."""
    if n == 0:
        raise PreconditionError("Zero has no square class")
    part = 1
    for p, e in factor(n).items():
        if e % 2:
            part *= p
    return part if n > 0 else -part


def square_class(r: RationalLike) -> int:
    """Squarefree representative of the class of r in Q^x/(Q^x)^2."""
    r = to_rational(r)
    return squarefree_part(r.numerator * r.denominator)


# ---------------------------------------------------------------------------
# Modular square roots and CRT
# ---------------------------------------------------------------------------

def _tonelli_shanks(a: int, p: int) -> int:
    """A square root of the quadratic residue a modulo the odd prime p."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)

    # Factor p-1 on the form q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1

    z = 2
    while legendre_symbol(z, p) != -1:
        z += 1

    m, c, t, root = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, root = i, b * b % p, t * b * b % p, root * b % p
    return root


def sqrt_mod(a: int, p: int, k: int = 1) -> Optional[int]:
    """Canonical square root of a modulo p^k.

    Args:
        a: Integer prime to p
        p: Odd prime
        k: Precision exponent (at least 1)

    Returns:
        The root zeta with 0 < zeta < p^k/2 and zeta^2 = a mod p^k, or None
        when a is a non-residue mod p
    """
    if k < 1:
        raise PreconditionError(f"Precision must be positive, got {k}")
    if a % p == 0:
        raise PreconditionError(f"{a} is divisible by {p}; factor out even powers first")
    if legendre_symbol(a % p, p) != 1:
        return None

    root = _tonelli_shanks(a % p, p)
    modulus = p
    for _ in range(1, k):
        modulus *= p
        root = (root - (root * root - a) * pow(2 * root, -1, modulus)) % modulus

    modulus = p**k
    root %= modulus
    return min(root, modulus - root)


def crt(pairs: Sequence[Tuple[int, int]]) -> int:
    """Solve x = r_i mod m_i for pairwise-coprime odd moduli.

    Returns:
        Least nonnegative solution modulo the product of the moduli
    """
    residue, modulus = 0, 1
    for r, m in pairs:
        if m < 1 or m % 2 == 0:
            raise PreconditionError(f"CRT moduli must be odd and positive, got {m}")
        if math.gcd(modulus, m) != 1:
            raise PreconditionError(f"CRT moduli are not coprime: {modulus} and {m}")
        step = ((r - residue) * pow(modulus, -1, m)) % m
        residue += modulus * step
        modulus *= m
    return residue % modulus


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------

def _normalize_place(v: Place) -> Place:
    if v in ("inf", "∞", "oo", math.inf):
        return "inf"
    if v in (2, "2"):
        return 2
    if isinstance(v, str) and v.isdigit():
        v = int(v)
    return require_odd_prime(v)


def _split(n: int, p: int) -> Tuple[int, int]:
    v = _int_val(n, p)
    return v, n // p**v


def _hilbert_odd(a: int, b: int, p: int) -> int:
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(w, p)
    return sign


def _hilbert_two(a: int, b: int) -> int:
    alpha, u = _split(a, 2)
    beta, w = _split(b, 2)

    def eps(n: int) -> int:
        return ((n - 1) // 2) % 2

    def omega(n: int) -> int:
        return ((n * n - 1) // 8) % 2

    exponent = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if exponent % 2 else 1


def hilbert_symbol(a: RationalLike, b: RationalLike, v: Place) -> int:
    """Hilbert symbol (a, b)_v at an odd prime, at 2 or at the real place.

    Args:
        a: Nonzero rational
        b: Nonzero rational
        v: Odd prime, 2 (or "2"), or "inf"/"∞"

    Returns:
        +1 if z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v, else -1
    """
    a, b = to_rational(a), to_rational(b)
    if a == 0 or b == 0:
        raise PreconditionError("Hilbert symbol needs nonzero arguments")
    place = _normalize_place(v)

    # Same square classes, integral representatives
    A, B = a.numerator * a.denominator, b.numerator * b.denominator
    if place == "inf":
        return -1 if A < 0 and B < 0 else 1
    if place == 2:
        return _hilbert_two(A, B)
    return _hilbert_odd(A, B, place)


@lru_cache(maxsize=None)
def _two_adic_solvable(a: int, b: int) -> bool:
    """Primitive solution of z^2 = a x^2 + b y^2 modulo 64.

    For a, b with 2-adic valuation 0 or 1 this is equivalent to a nontrivial
    solution over Q_2.
    """
    modulus = 64
    odd_squares = {(z * z) % modulus for z in range(1, modulus, 2)}
    all_squares = {(z * z) % modulus for z in range(modulus)}
    for x in range(modulus):
        for y in range(modulus):
            rhs = (a * x * x + b * y * y) % modulus
            if x % 2 or y % 2:
                if rhs in all_squares:
                    return True
            elif rhs in odd_squares:
                return True
    return False


def hilbert_symbol_search(a: RationalLike, b: RationalLike) -> int:
    """(a, b)_2 decided by a finite search modulo 2^6 instead of the closed form."""
    a, b = to_rational(a), to_rational(b)
    if a == 0 or b == 0:
        raise PreconditionError("Hilbert symbol needs nonzero arguments")

    def representative(n: int) -> int:
        v, u = _split(n, 2)
        return 2 ** (v % 2) * (u % 8)

    A = representative(a.numerator * a.denominator)
    B = representative(b.numerator * b.denominator)
    return 1 if _two_adic_solvable(A, B) else -1


def relevant_places(a: RationalLike, b: RationalLike) -> List[Place]:
    """Places where (a, b)_v can be -1: infinity, 2 and odd primes of a and b."""
    a, b = to_rational(a), to_rational(b)
    n = a.numerator * a.denominator * b.numerator * b.denominator
    odd = sorted(p for p in factor(n) if p != 2)
    return ["inf", 2] + odd


# ---------------------------------------------------------------------------
# Sums of squares
# ---------------------------------------------------------------------------

def _four_squares_descending(n: int) -> Tuple[int, int, int, int]:
    for a in range(math.isqrt(n), -1, -1):
        ra = n - a * a
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                d = math.isqrt(rc)
                if d * d == rc and d <= c:
                    return a, b, c, d
    raise VerificationError(f"No four-square representation found for {n}")


def _two_squares_prime(p: int) -> Tuple[int, int]:
    """p = c^2 + d^2 for a prime p = 1 mod 4 (Hermite-Serret descent)."""
    x = sqrt_mod(p - 1, p, 1)
    a, b = p, x
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    c = b
    d = math.isqrt(p - c * c)
    if c * c + d * d != p:
        raise VerificationError(f"Two-square descent failed for {p}")
    return c, d


def _two_squares_easy(r: int) -> Optional[Tuple[int, int]]:
    if r in (0, 1, 2):
        return {0: (0, 0), 1: (1, 0), 2: (1, 1)}[r]
    if r % 4 == 1 and isprime(r):
        return _two_squares_prime(r)
    if r % 2 == 0 and (r // 2) % 4 == 1 and isprime(r // 2):
        c, d = _two_squares_prime(r // 2)
        return c + d, abs(c - d)
    return None


def _four_squares_randomized(n: int) -> Tuple[int, int, int, int]:
    # Strip factors of 4 and rescale at the end
    scale, m = 1, n
    while m % 4 == 0:
        m //= 4
        scale *= 2

    rng = random.Random(m)
    root = math.isqrt(m)
    attempts = 0
    while True:
        attempts += 1
        a = rng.randint(0, root)
        b = rng.randint(0, math.isqrt(m - a * a))
        pair = _two_squares_easy(m - a * a - b * b)
        if pair is not None:
            logger.debug(f"four_squares({n}) found after {attempts} random draws")
            c, d = pair
            return a * scale, b * scale, c * scale, d * scale


def four_squares(n: int) -> Tuple[int, int, int, int]:
    """Lagrange four-square decomposition of n, sorted descending."""
    if n < 0:
        raise PreconditionError(f"four_squares needs n >= 0, got {n}")
    if n < FOUR_SQUARES_BRUTE_LIMIT:
        result = _four_squares_descending(n)
    else:
        result = _four_squares_randomized(n)
    if sum(c * c for c in result) != n:
        raise VerificationError(f"four_squares({n}) produced {result}")
    return tuple(sorted(result, reverse=True))


# ---------------------------------------------------------------------------
# Ideals of O = Z[1/2]
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OIdeal:
    """The ideal mO of Z[1/2], stored by its positive odd generator m."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or isinstance(self.m, bool) or self.m < 1 or self.m % 2 == 0:
            raise PreconditionError(f"Ideal generator must be a positive odd integer, got {self.m!r}")

    @classmethod
    def generated_by(cls, n: int) -> "OIdeal":
        """The ideal nO; powers of 2 are units in O."""
        return cls(odd_part(n))

    @classmethod
    def unit(cls) -> "OIdeal":
        return cls(1)

    @property
    def is_unit(self) -> bool:
        return self.m == 1

    def factorization(self) -> Dict[int, int]:
        return {} if self.m == 1 else factor(self.m)

    def primes(self) -> List[int]:
        return sorted(self.factorization())

    def val(self, p: int) -> int:
        return _int_val(self.m, p)

    def __mul__(self, other: "OIdeal") -> "OIdeal":
        return OIdeal(self.m * other.m)

    def sum(self, other: "OIdeal") -> "OIdeal":
        return OIdeal(math.gcd(self.m, other.m))

    def intersection(self, other: "OIdeal") -> "OIdeal":
        return OIdeal(self.m * other.m // math.gcd(self.m, other.m))

    def power(self, k: int) -> "OIdeal":
        if k < 0:
            raise PreconditionError(f"Ideal powers need k >= 0, got {k}")
        return OIdeal(self.m**k)

    def contains(self, r: RationalLike) -> bool:
        """Whether r lies in I (r in O with val_p(r) >= val_p(I) for p | m)."""
        r = to_rational(r)
        if odd_part(r.denominator) != 1:
            return False
        return r == 0 or all(val(r, p) >= e for p, e in self.factorization().items())

    def __str__(self) -> str:
        return f"({self.m})"


def ideal_ops(I: OIdeal, J: OIdeal, k: int = 1) -> Dict[str, OIdeal]:
    """Product, sum and intersection of two ideals, and the k-th power of I."""
    return {
        "product": I * J,
        "sum": I.sum(J),
        "intersection": I.intersection(J),
        "power": I.power(k),
    }
