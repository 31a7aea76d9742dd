"""
Constructive approximation in norm-one tori and their lift to Spin.

The searches here choose a torus parameter t, build torus elements with
prescribed residues at the primes of an ideal I, and turn pairs of torus
elements into commuting Spin elements over f_a. Every construction is
re-checked with rho_apply before a certificate is returned.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import primerange

from ..config.settings import settings
from ..errors import PreconditionError, SearchCapExceeded, VerificationError
from ..schemas.certificate_schemas import (
    ApproxCertificate,
    CongruenceRecord,
    IntegralityRecord,
    SpinPairRecord,
    TorusRecord,
    TrivializationRecord,
)
from ..algebra.arith import (
    OIdeal,
    factor,
    format_rational,
    four_squares,
    is_perfect_square,
    legendre,
    mod_rational,
    require_odd_prime,
    sqrt_mod,
    squarefree_part,
    symmetric_residue,
    to_rational,
    val,
)
from ..algebra.clifford import Multivector, QuadForm, embed_vector, gp
from ..algebra.spin import SpinElement
from ..algebra.tori import (
    SPLIT,
    TorusElem,
    Trivialization,
    is_integral_at,
    rho_apply,
    splitting_type,
    support,
    trivialize,
    weak_approx_torus,
)

# Set up logger
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Parameter searches
# ---------------------------------------------------------------------------

def foya_search(x: int, m: int, s_list: Sequence[int] = (), cap: Optional[int] = None) -> int:
    """Least k with t_k = 4^(mk) - x positive, not a square, and -s t_k not a square for each s.

    Raises:
        PreconditionError: if some s is a perfect square
        SearchCapExceeded: if no k <= cap works
    """
    cap = settings.foya_cap if cap is None else cap
    if m < 1:
        raise PreconditionError(f"m must be positive, got {m}")
    for s in s_list:
        if is_perfect_square(s):
            raise PreconditionError(f"{s} is a perfect square")

    for k in range(1, cap + 1):
        t = 4 ** (m * k) - x
        if t <= 0 or is_perfect_square(t):
            continue
        if any(is_perfect_square(-s * t) for s in s_list):
            continue
        logger.debug(f"foya_search({x}, {m}): k = {k}, t = {t}")
        return k
    raise SearchCapExceeded(f"No admissible k <= {cap} for x = {x}, m = {m}", {"x": x, "m": m, "cap": cap})


def _minus_one_parameters(m: int, cap: int) -> Iterable[int]:
    """Positive t = -1 mod m in increasing order."""
    for j in range(1, cap + 1):
        t = j * m - 1
        if t > 0:
            yield t


def _require_units(targets: Sequence[Fraction], ideal: OIdeal) -> None:
    for a in targets:
        if a == 0:
            raise PreconditionError("Targets must be nonzero")
        for p in ideal.primes():
            if val(a, p) != 0:
                raise PreconditionError(f"{a} is not a unit at {p}", {"a": format_rational(a), "p": p})


def _torus_record(z: TorusElem) -> TorusRecord:
    return TorusRecord(**z.to_dict())


def _trivialization_record(triv: Trivialization) -> TrivializationRecord:
    return TrivializationRecord(**triv.to_dict())


def _congruence(name: str, z: TorusElem, triv: Trivialization, target: Fraction) -> CongruenceRecord:
    lhs = rho_apply(z, triv)
    rhs = mod_rational(target, triv.modulus)
    if lhs != rhs:
        raise VerificationError(
            f"rho_{triv.p}({name}) = {lhs} but target is {rhs} mod {triv.p}^{triv.k}"
        )
    return CongruenceRecord(torus=name, p=triv.p, k=triv.k, lhs=lhs, rhs=rhs, target=format_rational(target))


def torus_from_record(record: TorusRecord) -> TorusElem:
    return TorusElem.from_dict(record.model_dump())


# ---------------------------------------------------------------------------
# Unit approximation
# ---------------------------------------------------------------------------

def _shortcut_unit(a: Fraction, ideal: OIdeal) -> ApproxCertificate:
    """a = +-1: z = a itself lies in every T_t(O)."""
    t = next(_minus_one_parameters(ideal.m, 2))
    z = TorusElem(t, a, 0)
    trivs = [trivialize(t, p, e) for p, e in sorted(ideal.factorization().items())]
    return ApproxCertificate(
        kind="unit",
        targets=[format_rational(a)],
        ideal=ideal.m,
        t=t,
        trivializations=[_trivialization_record(tr) for tr in trivs],
        tori={"z": _torus_record(z)},
        congruences=[_congruence("z", z, tr, a) for tr in trivs],
        supports={"R": []},
        integral_everywhere=True,
        notes=["shortcut: z = a"],
    )


def approx_unit(a: Any, I: Union[OIdeal, int], avoid_roots: Sequence[int] = ()) -> ApproxCertificate:
    """Find t and z in T_t(Z[1/2]) with rho_P(z) = a mod P^val_P(I) for every P | I.

    z = (X + sqrt(-t))/2^k with t = 4^k - X^2 and X = 2^k (a + 1/a)/2 modulo a
    high power of I; then zeta_P = 2^k (a - 1/a)/2 is a square root of -t and
    rho_P(z) = a.

    Args:
        a: Target, a unit at every prime of I
        I: Ideal of Z[1/2] (or its odd generator)
        avoid_roots: Non-squares s with sqrt(s) kept out of Q(sqrt(-t))

    Returns:
        ApproxCertificate with kind "unit"
    """
    a = to_rational(a)
    ideal = I if isinstance(I, OIdeal) else OIdeal.generated_by(I)
    _require_units([a], ideal)
    if a in (1, -1):
        return _shortcut_unit(a, ideal)

    exponents = ideal.factorization()
    depth = 1 + max(
        (max(int(val(a - 1, p)), int(val(a + 1, p)), e) for p, e in exponents.items()),
        default=0,
    )
    modulus = ideal.m ** (2 * depth)
    half_trace = mod_rational((a + 1 / a) / 2, modulus) if modulus > 1 else 0
    for s in avoid_roots:
        if is_perfect_square(s):
            raise PreconditionError(f"{s} is a perfect square")

    cap = modulus.bit_length() + settings.foya_cap
    for k in range(1, cap + 1):
        base = symmetric_residue(half_trace * pow(2, k, modulus), modulus) if modulus > 1 else 0
        for big_x in (base, base - modulus, base + modulus):
            if abs(big_x) >= 2**k:
                continue
            t = 4**k - big_x * big_x
            if is_perfect_square(t) or any(is_perfect_square(-s * t) for s in avoid_roots):
                continue
            return _unit_certificate(a, ideal, k, big_x, t)
    raise SearchCapExceeded(f"No admissible scale 2^k <= 2^{cap} for a = {a}", {"a": format_rational(a)})


def _unit_certificate(a: Fraction, ideal: OIdeal, k: int, big_x: int, t: int) -> ApproxCertificate:
    z = TorusElem(t, Fraction(big_x, 2**k), Fraction(1, 2**k))
    trivs = []
    for p, e in sorted(ideal.factorization().items()):
        m = p**e
        zeta = mod_rational(2**k * (a - 1 / a) / 2, m)
        if t % p:
            canonical = sqrt_mod(-t, p, e)
            if zeta not in (canonical, (-canonical) % m):
                raise VerificationError(f"zeta = {zeta} is not a square root of -{t} mod {p}^{e}")
        trivs.append(Trivialization(t, p, e, zeta))
    logger.info(f"approx_unit({a}, {ideal}): k = {k}, X = {big_x}, t = {t}")
    return ApproxCertificate(
        kind="unit",
        targets=[format_rational(a)],
        ideal=ideal.m,
        t=t,
        trivializations=[_trivialization_record(tr) for tr in trivs],
        tori={"z": _torus_record(z)},
        congruences=[_congruence("z", z, tr, a) for tr in trivs],
        supports={"R": support(z)},
        integral_everywhere=True,
        notes=[f"z = ({big_x} + sqrt(-t))/2^{k}"],
    )


# ---------------------------------------------------------------------------
# Pair approximation
# ---------------------------------------------------------------------------

def _check_parameter_for_ideal(t: int, ideal: OIdeal) -> None:
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}")
    for p in ideal.primes():
        if trivialize(t, p) is None:
            raise PreconditionError(f"-{t} is not a nonzero square modulo {p}", {"t": t, "p": p})


def _pair_attempt(
    a1: Fraction, a2: Fraction, ideal: OIdeal, t: int
) -> Tuple[ApproxCertificate, Optional[str]]:
    exponents = sorted(ideal.factorization().items())
    constraints1 = [(p, a1, e) for p, e in exponents]
    constraints2 = [(p, a2, e) for p, e in exponents]
    ideal_primes = set(ideal.primes())

    first = weak_approx_torus(t, constraints1)
    r1 = sorted(set(first.support) - ideal_primes)
    second = weak_approx_torus(t, constraints2, integral_at=r1)
    r2 = sorted(set(second.support) - ideal_primes)

    t_primes = set(factor(t)) - {2}
    sets = {"P(I)": ideal_primes, "R1": set(r1), "R2": set(r2), "P(t)": t_primes}
    problem = None
    names = list(sets)
    for i, left in enumerate(names):
        for right in names[i + 1:]:
            common = sets[left] & sets[right]
            if common:
                problem = f"{left} and {right} share {sorted(common)}"
                break
        if problem:
            break

    trivs = [trivialize(t, p, e) for p, e in exponents]
    extra = [trivialize(t, q, 1) for q in sorted(set(r1) | set(r2))]
    congruences = [_congruence("z1", first.z, tr, a1) for tr in trivs]
    congruences += [_congruence("z2", second.z, tr, a2) for tr in trivs]
    certificate = ApproxCertificate(
        kind="pair",
        targets=[format_rational(a1), format_rational(a2)],
        ideal=ideal.m,
        t=t,
        trivializations=[_trivialization_record(tr) for tr in trivs + extra if tr is not None],
        tori={"z1": _torus_record(first.z), "z2": _torus_record(second.z)},
        congruences=congruences,
        supports={"R1": r1, "R2": r2},
        integral_everywhere=not r1 and not r2,
    )
    return certificate, problem


def approx_pair(a1: Any, a2: Any, I: Union[OIdeal, int], t: Optional[int] = None) -> ApproxCertificate:
    """Two elements of one torus T_t approximating a1 and a2 at the primes of I.

    t defaults to the least positive t = -1 mod I whose supports come out
    pairwise disjoint from P(I) and P(t). z2 is forced integral on the
    support R1 of z1.

    Raises:
        PreconditionError: non-unit targets or an explicit t not split at I
        VerificationError: an explicit t gives overlapping prime sets
        SearchCapExceeded: no automatic t within the scan cap
    """
    a1, a2 = to_rational(a1), to_rational(a2)
    ideal = I if isinstance(I, OIdeal) else OIdeal.generated_by(I)
    _require_units([a1, a2], ideal)

    if t is not None:
        _check_parameter_for_ideal(t, ideal)
        certificate, problem = _pair_attempt(a1, a2, ideal, t)
        if problem:
            raise VerificationError(f"Prime sets are not disjoint for t = {t}: {problem}", {"t": t})
        return certificate

    for candidate in _minus_one_parameters(ideal.m, settings.foya_cap):
        certificate, problem = _pair_attempt(a1, a2, ideal, candidate)
        if problem is None:
            logger.info(f"approx_pair: t = {candidate}, R1 = {certificate.supports['R1']}, "
                        f"R2 = {certificate.supports['R2']}")
            return certificate
        logger.debug(f"approx_pair: rejecting t = {candidate}: {problem}")
    raise SearchCapExceeded(f"No t = -1 mod {ideal.m} with disjoint supports", {"ideal": ideal.m})


def root_minus_one_parameter(I: Union[OIdeal, int], J: Union[OIdeal, int]) -> Tuple[int, List[Trivialization]]:
    """Squarefree t = 3 mod 4 with t = -1 mod IJ, plus trivializations at the primes of IJ."""
    I = I if isinstance(I, OIdeal) else OIdeal.generated_by(I)
    J = J if isinstance(J, OIdeal) else OIdeal.generated_by(J)
    ideal = I * J
    for t in _minus_one_parameters(ideal.m, settings.cap_primes):
        if t % 4 == 3 and squarefree_part(t) == t:
            trivs = [trivialize(t, p, e) for p, e in sorted(ideal.factorization().items())]
            return t, trivs
    raise SearchCapExceeded(f"No squarefree t = 3 mod 4 with t = -1 mod {ideal.m}")


# ---------------------------------------------------------------------------
# Lifting pairs of torus elements to Spin
# ---------------------------------------------------------------------------

@dataclass
class SpinPair:
    """Commuting Spin elements g1, g2 over f_a carrying z1, z2."""

    t: int
    z1: TorusElem
    z2: TorusElem
    g1: SpinElement
    g2: SpinElement
    v: List[Tuple[Fraction, ...]]
    u: List[Tuple[Fraction, ...]]
    integrality: List[IntegralityRecord] = field(default_factory=list)
    approx: Optional[ApproxCertificate] = None

    @property
    def dim(self) -> int:
        return self.g1.form.dim

    def commute(self) -> bool:
        return self.g1.commutes_with(self.g2)

    def to_record(self) -> SpinPairRecord:
        return SpinPairRecord(
            t=self.t,
            dim=self.dim,
            z1=_torus_record(self.z1),
            z2=_torus_record(self.z2),
            v=[[format_rational(c) for c in vec] for vec in self.v],
            u=[[format_rational(c) for c in vec] for vec in self.u],
            g1=self.g1.g.to_json(),
            g2=self.g2.g.to_json(),
            commute=self.commute(),
            integrality=list(self.integrality),
            approx=self.approx,
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.to_record().model_dump()


def _orthogonal_norm_t_vectors(t: int, dim: int) -> List[Tuple[Fraction, ...]]:
    """Three mutually orthogonal vectors of norm t in coordinates 5..8."""
    a, b, c, d = four_squares(t)
    blocks = [(a, b, c, d), (-b, a, -d, c), (-c, d, a, -b)]
    vectors = []
    for block in blocks:
        coords = [Fraction(0)] * dim
        coords[4:8] = [Fraction(x) for x in block]
        vectors.append(tuple(coords))
    return vectors


def _torus_factor(form: QuadForm, z: TorusElem, p1: Multivector, p2: Multivector) -> Multivector:
    """(1+x)/2 + (y/2)(P1 - P2) - ((1-x)/(2t)) P1 P2."""
    return (
        Multivector.scalar(form, (1 + z.x) / 2)
        + (p1 - p2).scale(z.y / 2)
        - gp(p1, p2).scale((1 - z.x) / (2 * z.t))
    )


def _integrality_records(z1: TorusElem, z2: TorusElem) -> List[IntegralityRecord]:
    primes = set()
    for z in (z1, z2):
        for c in (z.x.denominator, z.y.denominator):
            primes |= set(factor(c)) if c > 1 else set()
    primes |= set(factor(z1.t))
    records = []
    for p in sorted(primes - {2}):
        kind = splitting_type(z1.t, p)
        record = IntegralityRecord(
            p=p, splitting=kind, z1_integral=is_integral_at(z1, p), z2_integral=is_integral_at(z2, p)
        )
        if kind != SPLIT and not (record.z1_integral and record.z2_integral):
            raise VerificationError(f"Torus factor is not integral at the non-split prime {p}")
        records.append(record)
    return records


def torus_to_spin(t: int, z1: TorusElem, z2: TorusElem, dim: Optional[int] = None) -> SpinPair:
    """Commuting g1, g2 in Spin_{f_a}(Q) from two elements of T_t(Q).

    With V_i = e_i and U_i orthogonal norm-t vectors, g1 acts on the planes
    (V1, U1), (V2, U2) and g2 on (V2, U2), (V3, U3).
    """
    dim = dim or settings.default_dim
    if dim < 20 or dim % 2:
        raise PreconditionError(f"torus_to_spin needs an even dimension of at least 20, got {dim}")
    if z1.t != t or z2.t != t:
        raise PreconditionError(f"Torus elements must lie in T_{t}")

    form = QuadForm.f_a(dim)
    v = [form.basis_vector(i) for i in (1, 2, 3)]
    u = _orthogonal_norm_t_vectors(t, dim)
    planes = [gp(embed_vector(form, vi), embed_vector(form, ui)) for vi, ui in zip(v, u)]

    g1 = SpinElement.from_multivector(_torus_factor(form, z1, planes[0], planes[1]))
    g2 = SpinElement.from_multivector(_torus_factor(form, z2, planes[1], planes[2]))
    if not g1.commutes_with(g2):
        raise VerificationError("Lifted torus elements do not commute")
    logger.info(f"torus_to_spin: t = {t}, g1 has {len(g1.g)} terms, g2 has {len(g2.g)} terms")
    return SpinPair(t, z1, z2, g1, g2, v, u, _integrality_records(z1, z2))


def approx_spin_pair(a1: Any, a2: Any, I: Union[OIdeal, int], dim: Optional[int] = None) -> SpinPair:
    """approx_pair followed by torus_to_spin."""
    certificate = approx_pair(a1, a2, I)
    z1 = torus_from_record(certificate.tori["z1"])
    z2 = torus_from_record(certificate.tori["z2"])
    pair = torus_to_spin(certificate.t, z1, z2, dim)
    pair.approx = certificate
    return pair


# ---------------------------------------------------------------------------
# Prime searches, class numbers and principal primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueCondition:
    """p = residue mod modulus."""

    residue: int
    modulus: int

    def holds(self, p: int) -> bool:
        return p % self.modulus == self.residue % self.modulus


@dataclass(frozen=True)
class LegendreCondition:
    """Legendre(a | p) = sign."""

    a: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PreconditionError(f"Legendre sign must be +1 or -1, got {self.sign}")

    def holds(self, p: int) -> bool:
        return legendre(self.a, p) == self.sign


PrimeCondition = Union[ResidueCondition, LegendreCondition]


def _as_condition(item: Any) -> PrimeCondition:
    if isinstance(item, (ResidueCondition, LegendreCondition)):
        return item
    kind, datum = item
    if kind == "residue":
        return ResidueCondition(*datum)
    if kind == "legendre":
        return LegendreCondition(*datum)
    raise PreconditionError(f"Unknown prime condition kind {kind!r}")


def find_primes_legendre(conds: Sequence[Any], count: int, cap: Optional[int] = None) -> List[int]:
    """The first `count` odd primes satisfying every condition, ascending."""
    cap = cap or settings.cap_primes
    conditions = [_as_condition(c) for c in conds]
    found: List[int] = []
    if count <= 0:
        return found
    for p in primerange(3, cap + 1):
        p = int(p)
        if all(c.holds(p) for c in conditions):
            found.append(p)
            if len(found) == count:
                return found
    raise SearchCapExceeded(
        f"Only {len(found)} of {count} primes found below {cap}", {"found": found, "cap": cap}
    )


def class_number(D: int) -> int:
    """Number of reduced primitive positive definite forms of discriminant D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise PreconditionError(f"{D} is not a negative discriminant")
    h = 0
    b = D % 2
    while 3 * b * b <= -D:
        q = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= q:
            if q % a == 0:
                c = q // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    h += 1 if b == 0 or a == b or a == c else 2
            a += 1
        b += 2
    return h


def _zigzag(bound: int) -> Iterable[int]:
    yield 0
    for x in range(1, bound + 1):
        yield x
        yield -x


def principal_witness(t: int, p: int) -> Optional[Tuple[int, int]]:
    """(x, y) representing p by the principal form of Q(sqrt(-t)), or None.

    The principal form is x^2 + xy + ((1+t)/4) y^2 for t = 3 mod 4 and
    x^2 + t y^2 otherwise.
    """
    require_odd_prime(p)
    if t < 1 or squarefree_part(t) != t:
        raise PreconditionError(f"t must be positive and squarefree, got {t}")
    if legendre(-t, p) != 1:
        raise PreconditionError(f"{p} does not split in Q(sqrt(-{t}))")

    if t % 4 == 3:
        c = (1 + t) // 4

        def norm(x: int, y: int) -> int:
            return x * x + x * y + c * y * y
    else:
        def norm(x: int, y: int) -> int:
            return x * x + t * y * y

    y = 0
    while t * y * y <= 4 * p:
        for x in _zigzag(math.isqrt(p) + y + 1):
            if norm(x, y) == p:
                return x, y
        y += 1
    return None


def torus_from_principal(t: int, p: int) -> Optional[TorusElem]:
    """b / conj(b) for a principal generator b of norm p; torus_val at p is -1."""
    witness = principal_witness(t, p)
    if witness is None:
        return None
    x, y = witness
    if t % 4 == 3:
        big_x, big_y = Fraction(2 * x + y, 2), Fraction(y, 2)
    else:
        big_x, big_y = Fraction(x), Fraction(y)
    return TorusElem(t, (big_x * big_x - t * big_y * big_y) / p, 2 * big_x * big_y / p)


@dataclass
class SquarePartition:
    """Primes p = 3 mod 4 sorted by which of rho_p(z), -rho_p(z) is a square."""

    minus_squares: Dict[int, int] = field(default_factory=dict)
    squares: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": {str(p): r for p, r in sorted(self.minus_squares.items())},
            "R_prime": {str(p): r for p, r in sorted(self.squares.items())},
        }


def square_partition(z: TorusElem, trivs: Sequence[Trivialization]) -> SquarePartition:
    """Split the primes = 3 mod 4 of trivs; each entry stores the witnessing square root."""
    partition = SquarePartition()
    for triv in trivs:
        if triv.p % 4 != 3:
            continue
        rho = rho_apply(z, triv)
        root = sqrt_mod(rho, triv.p, triv.k)
        if root is not None:
            partition.squares[triv.p] = root
        else:
            partition.minus_squares[triv.p] = sqrt_mod(-rho, triv.p, triv.k)
    return partition
