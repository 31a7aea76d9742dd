"""
Generalized Steinberg symbols in the spin double cover.

For commuting elements of Theta_f(Q), the kernel of the spinor norm, the
symbol [M1:M2] is the commutator of any two Spin lifts. It is a central
element of the kernel {+1, -1} and does not depend on the choice of lifts.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from ..errors import PreconditionError, VerificationError
from ..schemas.report_schemas import SuiteReport
from ..algebra.arith import is_square
from ..algebra.clifford import QuadForm, gp, reverse
from ..algebra.linalg import identity
from ..algebra.spin import (
    SOMatrix,
    SpinElement,
    coroot,
    plane_rotation,
    reflection_decompose,
    spin_from_vectors,
)

# Set up logger
logger = logging.getLogger(__name__)


class SymbolValue(IntEnum):
    """Value of a symbol in the kernel {+1, -1}."""

    PLUS = 1
    MINUS = -1


@dataclass(eq=False)
class ThetaElement:
    """SO_f(Q) matrix with trivial spinor norm, with its reflection vectors."""

    so: SOMatrix
    vectors: List[Tuple[Fraction, ...]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.vectors = reflection_decompose(self.so)
        product = Fraction(1)
        for a in self.vectors:
            product *= self.so.form.value(a)
        if not is_square(product):
            raise PreconditionError(
                f"Spinor norm is not trivial: reflection norms multiply to {product}",
                {"norm_product": str(product)},
            )

    @classmethod
    def from_spin(cls, g: SpinElement) -> "ThetaElement":
        return cls(SOMatrix.of(g))

    @classmethod
    def identity(cls, form: QuadForm) -> "ThetaElement":
        return cls(SOMatrix(identity(form.dim), form))

    @property
    def form(self) -> QuadForm:
        return self.so.form

    @property
    def matrix(self):
        return self.so.matrix

    def __mul__(self, other: "ThetaElement") -> "ThetaElement":
        return ThetaElement(self.so * other.so)

    def inverse(self) -> "ThetaElement":
        return ThetaElement(self.so.inverse())

    def conjugate_by(self, other: "ThetaElement") -> "ThetaElement":
        """other * self * other^-1."""
        return ThetaElement(other.so * self.so * other.so.inverse())

    def commutes_with(self, other: "ThetaElement") -> bool:
        return self.so.commutes_with(other.so)

    def to_json(self) -> Dict[str, Any]:
        return self.so.to_json()


def theta_lift(m: ThetaElement) -> SpinElement:
    """One of the two Spin lifts of m; the other is its negative."""
    if not m.vectors:
        return SpinElement.identity(m.form)
    return spin_from_vectors(m.form, m.vectors)


def symbol_of_lifts(g1: SpinElement, g2: SpinElement) -> SymbolValue:
    """The commutator g1 g2 g1^-1 g2^-1 of two Spin elements, which must be +1 or -1."""
    commutator = gp(gp(gp(g1.g, g2.g), reverse(g1.g)), reverse(g2.g))
    if commutator == 1:
        return SymbolValue.PLUS
    if commutator == -1:
        return SymbolValue.MINUS
    raise VerificationError(
        "Commutator of lifts is not central", {"commutator": commutator.render()}
    )


def gen_symbol(m1: ThetaElement, m2: ThetaElement) -> SymbolValue:
    """[m1:m2] for commuting elements of Theta."""
    if not m1.commutes_with(m2):
        raise PreconditionError("Symbol needs commuting arguments")
    return symbol_of_lifts(theta_lift(m1), theta_lift(m2))


def steinberg_symbol(a1: Any, a2: Any, dim: int = 6) -> SymbolValue:
    """{a1:a2} as [h1(a1):h2(a2)] in the spin extension."""
    h1 = ThetaElement.from_spin(coroot(1, a1, dim))
    h2 = ThetaElement.from_spin(coroot(2, a2, dim))
    return gen_symbol(h1, h2)


def reflection_pair(form: QuadForm, i: int, j: int) -> ThetaElement:
    """tau_{e_i} tau_{e_j} for basis vectors of equal norm."""
    a, b = form.basis_vector(i), form.basis_vector(j)
    return ThetaElement.from_spin(spin_from_vectors(form, [a, b]))


def reflection_triple_symbol(dim: int = 6) -> SymbolValue:
    """[tau_{e2}tau_{e4} : tau_{e4}tau_{e6}] over f_s, which is -1."""
    form = QuadForm.f_s(dim)
    return gen_symbol(reflection_pair(form, 2, 4), reflection_pair(form, 4, 6))


# ---------------------------------------------------------------------------
# Property suite
# ---------------------------------------------------------------------------

_ROTATION_PARAMS = [Fraction(n, d) for n in range(-5, 6) for d in range(1, 5)
                    if n and abs(Fraction(n, d)) != 1]


def _random_rational(rng: random.Random, exclude: Tuple[int, ...] = (0,)) -> Fraction:
    while True:
        value = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if value not in exclude:
            return value


def _coroot_family(rng: random.Random, dim: int) -> List[ThetaElement]:
    return [ThetaElement.from_spin(coroot(rng.choice((1, 2)), _random_rational(rng), dim)) for _ in range(3)]


def _rotation_family(rng: random.Random, dim: int) -> List[ThetaElement]:
    form = QuadForm.f_s(dim)
    planes = [(2 * k + 1, 2 * k + 2) for k in range(dim // 2)]
    family = []
    for _ in range(3):
        i, j = rng.choice(planes)
        family.append(ThetaElement.from_spin(plane_rotation(form, i, j, rng.choice(_ROTATION_PARAMS))))
    return family


def _reflection_family(rng: random.Random, dim: int) -> List[ThetaElement]:
    form = QuadForm.f_s(dim)
    family = []
    for _ in range(3):
        parity = rng.choice((1, 2))
        i, j = rng.sample(range(parity, dim + 1, 2), 2)
        family.append(reflection_pair(form, i, j))
    return family


FAMILIES = {
    "coroots": _coroot_family,
    "rotations": _rotation_family,
    "reflections": _reflection_family,
}


def _random_conjugator(rng: random.Random, dim: int) -> ThetaElement:
    form = QuadForm.f_s(dim)
    i = rng.randrange(1, dim)
    rotation = plane_rotation(form, i, i + 1, rng.choice(_ROTATION_PARAMS))
    return ThetaElement.from_spin(coroot(rng.choice((1, 2)), _random_rational(rng), dim) * rotation)


def _matrices(*elements: ThetaElement) -> Dict[str, Any]:
    return {f"m{k + 1}": e.to_json()["matrix"] for k, e in enumerate(elements)}


def _check_triple(report: SuiteReport, g1: ThetaElement, g2: ThetaElement, g3: ThetaElement) -> bool:
    """Items (1) to (5), lift independence and the anticommutation cross-check."""
    one = ThetaElement.identity(g1.form)
    s12 = gen_symbol(g1, g2)
    s13 = gen_symbol(g1, g3)
    s23 = gen_symbol(g2, g3)
    witness = _matrices(g1, g2, g3)

    checks = [
        ("identity", gen_symbol(g1, one) == SymbolValue.PLUS and gen_symbol(one, g1) == SymbolValue.PLUS),
        ("antisymmetry", gen_symbol(g2, g1) == s12),
        ("right_multiplicativity", gen_symbol(g1, g2 * g3) == s12 * s13),
        ("left_multiplicativity", gen_symbol(g1 * g2, g3) == s13 * s23),
        ("inverses", gen_symbol(g1.inverse(), g2) == s12 and gen_symbol(g1, g2.inverse()) == s12),
    ]
    lift1, lift2 = theta_lift(g1), theta_lift(g2)
    checks.append(("lift_independence", symbol_of_lifts(-lift1, lift2) == s12
                   and symbol_of_lifts(lift1, -lift2) == s12))
    anticommute = gp(lift1.g, lift2.g) == -gp(lift2.g, lift1.g)
    checks.append(("anticommute_cross_check", anticommute == (s12 == SymbolValue.MINUS)))

    for name, ok in checks:
        if not report.record(name, ok, witness):
            return False
    return True


def symbol_property_suite(seed: int, dim: int = 8, pairs: int = 100, conjugations: int = 20) -> SuiteReport:
    """Check the symbol identities on random commuting families.

    Stops at the first counterexample, which the report keeps.

    Args:
        seed: Random seed
        dim: Dimension of f_s, at least 6
        pairs: Number of random commuting triples
        conjugations: Number of random conjugators for the invariance check

    Returns:
        SuiteReport with one tally per identity
    """
    if dim < 6 or dim % 2:
        raise PreconditionError(f"Symbol suite needs an even dimension of at least 6, got {dim}")
    rng = random.Random(seed)
    report = SuiteReport(suite="steinberg", seed=seed, dim=dim)
    names = sorted(FAMILIES)

    for index in range(pairs):
        family = rng.choice(names)
        g1, g2, g3 = FAMILIES[family](rng, dim)
        if not _check_triple(report, g1, g2, g3):
            report.counterexample["family"] = family
            return report

        if index < conjugations:
            l = _random_conjugator(rng, dim)
            ok = gen_symbol(g1, g2) == gen_symbol(g1.conjugate_by(l), g2.conjugate_by(l))
            if not report.record("conjugation_invariance", ok, _matrices(g1, g2, l)):
                return report

    for a in [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-1)] + [
        _random_rational(rng, (0, 1)) for _ in range(20)
    ]:
        ok = steinberg_symbol(a, 1 - a, dim) == SymbolValue.PLUS
        if not report.record("steinberg_relation", ok, {"a": str(a)}):
            return report

    triple = reflection_triple_symbol(dim)
    report.extras["reflection_triple_symbol"] = int(triple)
    report.record("reflection_triple", triple == SymbolValue.MINUS)
    logger.info(f"Symbol suite (seed {seed}, dim {dim}): passed = {report.passed}")
    return report
