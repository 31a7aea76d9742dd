"""
Sparse exact Clifford algebra over a diagonal quadratic form.

A blade e_T is a bitmask: bit i-1 set means e_i is a factor, and the factors
of a stored blade are always in ascending index order. Products of blades are
reduced with the transposition-sign rule and the contraction e_i e_i = d_i.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import NotSpinError, PreconditionError
from .arith import format_rational, to_rational

# Set up logger
logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]
Scalar = Union[Fraction, int]


@dataclass(frozen=True)
class QuadForm:
    """Diagonal quadratic form d_1 x_1^2 + ... + d_2n x_2n^2."""

    diag: Tuple[Fraction, ...]
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "diag", tuple(to_rational(d) for d in self.diag))
        if not self.diag or len(self.diag) % 2:
            raise PreconditionError(f"Form dimension must be a positive even integer, got {len(self.diag)}")
        if any(d == 0 for d in self.diag):
            raise PreconditionError("Form is degenerate: zero diagonal entry")

    @classmethod
    def f_a(cls, dim: int) -> "QuadForm":
        """Sum of squares."""
        return cls(tuple([1] * dim), name="fa")

    @classmethod
    def f_s(cls, dim: int) -> "QuadForm":
        """Split form: d_{2i-1} = -1, d_{2i} = +1."""
        return cls(tuple(-1 if i % 2 == 0 else 1 for i in range(dim)), name="fs")

    @classmethod
    def named(cls, name: str, dim: int) -> "QuadForm":
        builders = {"fa": cls.f_a, "fs": cls.f_s}
        if name not in builders:
            raise PreconditionError(f"Unknown form {name!r}; expected one of {sorted(builders)}")
        return builders[name](dim)

    @property
    def dim(self) -> int:
        return len(self.diag)

    @property
    def is_definite(self) -> bool:
        return all(d > 0 for d in self.diag)

    @cached_property
    def sign_mask(self) -> Optional[int]:
        """Bitmask of the -1 entries when every entry is +1 or -1, else None."""
        if any(d not in (1, -1) for d in self.diag):
            return None
        return sum(1 << i for i, d in enumerate(self.diag) if d == -1)

    def vector(self, coords: Iterable) -> Vector:
        v = tuple(to_rational(c) for c in coords)
        if len(v) != self.dim:
            raise PreconditionError(f"Vector has length {len(v)}, form has dimension {self.dim}")
        return v

    def basis_vector(self, i: int, scale: Scalar = 1) -> Vector:
        """scale * e_i, 1-based."""
        if not 1 <= i <= self.dim:
            raise PreconditionError(f"Basis index {i} outside 1..{self.dim}")
        coords = [Fraction(0)] * self.dim
        coords[i - 1] = to_rational(scale)
        return tuple(coords)

    def value(self, v: Sequence) -> Fraction:
        return sum((d * x * x for d, x in zip(self.diag, v)), Fraction(0))

    def bilinear(self, u: Sequence, v: Sequence) -> Fraction:
        """The bilinear form with bilinear(v, v) = value(v)."""
        return sum((d * x * y for d, x, y in zip(self.diag, u, v)), Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "diag": [format_rational(d) for d in self.diag]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "QuadForm":
        return cls(tuple(to_rational(d) for d in data["diag"]), name=data.get("name", "custom"))


# ---------------------------------------------------------------------------
# Blades
# ---------------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_mask(indices: Iterable[int]) -> int:
    """Bitmask of a set of distinct 1-based indices."""
    mask = 0
    for i in indices:
        if i < 1 or mask & (1 << (i - 1)):
            raise PreconditionError(f"Invalid or repeated blade index {i}")
        mask |= 1 << (i - 1)
    return mask


def blade_indices(mask: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def grade(mask: int) -> int:
    return _popcount(mask)


def reorder_sign(a: int, b: int) -> int:
    """Sign of sorting e_A e_B into ascending order: one swap per pair i in A, j in B with i > j."""
    a >>= 1
    swaps = 0
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a: int, b: int, form: QuadForm) -> Tuple[Scalar, int]:
    """e_A e_B = coef * e_{A xor B}."""
    sign = reorder_sign(a, b)
    common = a & b
    negatives = form.sign_mask
    if negatives is not None:
        if _popcount(common & negatives) & 1:
            sign = -sign
        return sign, a ^ b

    coef: Scalar = sign
    i = 0
    while common:
        if common & 1:
            coef *= form.diag[i]
        common >>= 1
        i += 1
    return coef, a ^ b


def _reverse_sign(mask: int) -> int:
    return -1 if grade(mask) % 4 in (2, 3) else 1


# ---------------------------------------------------------------------------
# Multivectors
# ---------------------------------------------------------------------------

class Multivector:
    """Immutable sparse element of Cliff_f(Q)."""

    __slots__ = ("form", "_terms", "_hash")

    def __init__(self, form: QuadForm, terms: Optional[Mapping[int, Scalar]] = None):
        limit = 1 << form.dim
        clean: Dict[int, Fraction] = {}
        for mask, coef in (terms or {}).items():
            if not 0 <= mask < limit:
                raise PreconditionError(f"Blade mask {mask:#b} outside dimension {form.dim}")
            c = to_rational(coef)
            if c:
                clean[mask] = c
        self.form = form
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, form: QuadForm, terms: Dict[int, Fraction]) -> "Multivector":
        obj = cls.__new__(cls)
        obj.form = form
        obj._terms = terms
        obj._hash = None
        return obj

    # Constructors

    @classmethod
    def scalar(cls, form: QuadForm, value: Scalar = 1) -> "Multivector":
        return cls(form, {0: value})

    @classmethod
    def zero(cls, form: QuadForm) -> "Multivector":
        return cls._raw(form, {})

    @classmethod
    def blade(cls, form: QuadForm, indices: Iterable[int], coef: Scalar = 1) -> "Multivector":
        """coef * e_T for a set T of distinct indices, stored in ascending order."""
        return cls(form, {blade_mask(sorted(indices)): coef})

    @classmethod
    def e(cls, form: QuadForm, *indices: int) -> "Multivector":
        """The ordered product e_{i1} e_{i2} ... of basis vectors."""
        result = cls.scalar(form)
        for i in indices:
            result = result * cls.blade(form, [i])
        return result

    # Inspection

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, mask: int) -> Fraction:
        return self._terms.get(mask, Fraction(0))

    def grades(self) -> List[int]:
        return sorted({grade(m) for m in self._terms})

    def grade_part(self, k: int) -> "Multivector":
        return Multivector._raw(self.form, {m: c for m, c in self._terms.items() if grade(m) == k})

    def is_even(self) -> bool:
        return all(grade(m) % 2 == 0 for m in self._terms)

    def is_scalar(self) -> bool:
        return all(m == 0 for m in self._terms)

    def is_vector(self) -> bool:
        return all(grade(m) == 1 for m in self._terms)

    def scalar_part(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def to_vector(self) -> Vector:
        if not self.is_vector():
            raise PreconditionError(f"Not a grade-1 multivector: {self.render()}")
        coords = [Fraction(0)] * self.form.dim
        for mask, c in self._terms.items():
            coords[mask.bit_length() - 1] = c
        return tuple(coords)

    # Arithmetic

    def _check_form(self, other: "Multivector") -> None:
        if self.form != other.form:
            raise PreconditionError("Multivectors live over different quadratic forms")

    def _coerce(self, other: Any) -> Optional["Multivector"]:
        if isinstance(other, Multivector):
            self._check_form(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Multivector.scalar(self.form, other)
        return None

    def __add__(self, other: Any) -> "Multivector":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for mask, c in other._terms.items():
            s = terms.get(mask, 0) + c
            if s:
                terms[mask] = s
            else:
                terms.pop(mask, None)
        return Multivector._raw(self.form, terms)

    __radd__ = __add__

    def __neg__(self) -> "Multivector":
        return Multivector._raw(self.form, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Multivector":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Multivector":
        return (-self) + other

    def scale(self, factor: Scalar) -> "Multivector":
        factor = to_rational(factor)
        if not factor:
            return Multivector.zero(self.form)
        return Multivector._raw(self.form, {m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other: Any) -> "Multivector":
        if isinstance(other, Multivector):
            return gp(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "Multivector":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other: Scalar) -> "Multivector":
        other = to_rational(other)
        if other == 0:
            raise ZeroDivisionError("Multivector division by zero")
        return self.scale(1 / other)

    def reverse(self) -> "Multivector":
        return reverse(self)

    # Comparison

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Multivector):
            return self.form == other.form and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.form, frozenset(self._terms.items())))
        return self._hash

    # Rendering

    def render(self) -> str:
        """Canonical text "c·e{i,j,...}" joined by " + ", blades sorted by mask."""
        if not self._terms:
            return "0"
        parts = []
        for mask in sorted(self._terms):
            indices = ",".join(str(i) for i in blade_indices(mask))
            parts.append(f"{format_rational(self._terms[mask])}·e{{{indices}}}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Multivector({self.render()})"

    def to_json(self) -> List[Dict[str, Any]]:
        """Term list sorted by mask."""
        return [
            {"blade": list(blade_indices(mask)), "coef": format_rational(self._terms[mask])}
            for mask in sorted(self._terms)
        ]

    @classmethod
    def from_json(cls, form: QuadForm, data: Sequence[Mapping[str, Any]]) -> "Multivector":
        terms: Dict[int, Fraction] = {}
        for term in data:
            mask = blade_mask(term["blade"])
            if mask in terms:
                raise PreconditionError(f"Duplicate blade {term['blade']} in term list")
            terms[mask] = to_rational(term["coef"])
        return cls(form, terms)


def gp(x: Multivector, y: Multivector) -> Multivector:
    """Geometric product."""
    x._check_form(y)
    form = x.form
    out: Dict[int, Fraction] = {}
    for ma, ca in x._terms.items():
        for mb, cb in y._terms.items():
            factor, mask = blade_product(ma, mb, form)
            out[mask] = out.get(mask, 0) + factor * ca * cb
    return Multivector._raw(form, {m: c for m, c in out.items() if c})


def reverse(x: Multivector) -> Multivector:
    """Canonical involution: reverses the factor order of every blade."""
    return Multivector._raw(x.form, {m: c * _reverse_sign(m) for m, c in x._terms.items()})


def embed_vector(form: QuadForm, v: Sequence) -> Multivector:
    """Grade-1 multivector sum v_i e_i."""
    coords = form.vector(v)
    return Multivector._raw(form, {1 << i: c for i, c in enumerate(coords) if c})


def product_of_vectors(form: QuadForm, vectors: Sequence[Sequence]) -> Multivector:
    """e_{v1} e_{v2} ... e_{vk} in the given order."""
    result = Multivector.scalar(form)
    for v in vectors:
        result = gp(result, embed_vector(form, v))
    return result


def twisted_action(g: Multivector, v: Sequence) -> Vector:
    """tau_g(v) = g v g'.

    Raises:
        NotSpinError: if g v g' leaves the vector space
    """
    w = gp(gp(g, embed_vector(g.form, v)), reverse(g))
    if not w.is_vector():
        raise NotSpinError(
            "Twisted action is not grade-1; the element does not normalize the vector space",
            {"grades": w.grades()},
        )
    return w.to_vector()
