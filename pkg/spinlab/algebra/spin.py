"""
Spin group elements, reflections and the spinor norm.

A SpinElement always carries the exact matrix of its twisted action, computed
once when membership is verified. Matrices act on column vectors and the
columns of tau_g are tau_g(e_1), ..., tau_g(e_2n).
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import settings
from ..errors import NotSpinError, PreconditionError, SearchCapExceeded, VerificationError
from .arith import rational_sqrt, square_class, squarefree_part, to_rational
from .clifford import (
    Multivector,
    QuadForm,
    Vector,
    blade_mask,
    gp,
    product_of_vectors,
    reverse,
    twisted_action,
)
from .linalg import (
    exact_det,
    from_columns,
    identity,
    is_orthogonal,
    matrices_equal,
    matrix_to_json,
    to_float,
)

# Set up logger
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def orthogonal_inverse(matrix: np.ndarray, diag: Sequence) -> np.ndarray:
    """D^-1 M^T D, the inverse of a matrix preserving diag(f)."""
    inv = matrix.T.copy()
    for i in range(len(diag)):
        for j in range(len(diag)):
            inv[i, j] = inv[i, j] * diag[j] / diag[i]
    return inv


@dataclass
class SpinCertificate:
    """Outcome of a Spin membership test."""

    accepted: bool
    reason: Optional[str] = None
    matrix: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "matrix": None if self.matrix is None else matrix_to_json(self.matrix),
        }


def is_spin(x: Multivector) -> SpinCertificate:
    """Check x is even, x x' = 1 and every twisted action is grade-1.

    Returns:
        Certificate carrying the SO matrix, or the first violated condition
    """
    if not x.is_even():
        return SpinCertificate(False, f"odd grade present (grades {x.grades()})")

    x_rev = reverse(x)
    if gp(x, x_rev) != 1:
        return SpinCertificate(False, "x x' is not 1")

    form = x.form
    columns = []
    for i in range(form.dim):
        image = gp(gp(x, Multivector.blade(form, [i + 1])), x_rev)
        if not image.is_vector():
            return SpinCertificate(False, f"twisted action of e{i + 1} is not grade-1")
        columns.append(image.to_vector())

    matrix = from_columns(columns)
    det = exact_det(matrix)
    if det != 1:
        return SpinCertificate(False, f"action matrix has determinant {det}")
    return SpinCertificate(True, None, matrix)


class SpinElement:
    """Verified element of Spin_f(Q) together with its SO_f(Q) matrix."""

    __slots__ = ("g", "matrix")

    def __init__(self, g: Multivector, matrix: np.ndarray):
        self.g = g
        self.matrix = matrix

    @classmethod
    def from_multivector(cls, x: Multivector) -> "SpinElement":
        certificate = is_spin(x)
        if not certificate.accepted:
            raise NotSpinError(f"Not a Spin element: {certificate.reason}", {"element": x.render()})
        return cls(x, certificate.matrix)

    @classmethod
    def identity(cls, form: QuadForm) -> "SpinElement":
        return cls(Multivector.scalar(form), identity(form.dim))

    @property
    def form(self) -> QuadForm:
        return self.g.form

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        if not isinstance(other, SpinElement):
            return NotImplemented
        return SpinElement(gp(self.g, other.g), self.matrix @ other.matrix)

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.g, self.matrix)

    def inverse(self) -> "SpinElement":
        return SpinElement(reverse(self.g), orthogonal_inverse(self.matrix, self.form.diag))

    def act(self, v: Sequence) -> Vector:
        """tau_g(v) from the cached matrix."""
        coords = self.form.vector(v)
        return tuple(sum((self.matrix[i, j] * coords[j] for j in range(len(coords))), Fraction(0))
                     for i in range(len(coords)))

    def commutes_with(self, other: "SpinElement") -> bool:
        return gp(self.g, other.g) == gp(other.g, self.g)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SpinElement):
            return NotImplemented
        return self.g == other.g

    def __hash__(self) -> int:
        return hash(self.g)

    def __repr__(self) -> str:
        return f"SpinElement({self.g.render()})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "form": self.form.to_dict(),
            "terms": self.g.to_json(),
            "matrix": matrix_to_json(self.matrix),
        }


# ---------------------------------------------------------------------------
# SO matrices, reflections and the spinor norm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquareClass:
    """Element of Q^x/(Q^x)^2 named by its squarefree representative."""

    representative: int

    def __post_init__(self):
        if self.representative == 0 or squarefree_part(self.representative) != self.representative:
            raise PreconditionError(f"{self.representative} is not a squarefree nonzero integer")

    @property
    def is_trivial(self) -> bool:
        return self.representative == 1


@dataclass(frozen=True, eq=False)
class SOMatrix:
    """Matrix in SO_f(Q); construction checks orthogonality and determinant."""

    matrix: np.ndarray
    form: QuadForm

    def __post_init__(self):
        if self.matrix.shape != (self.form.dim, self.form.dim):
            raise PreconditionError(f"Matrix shape {self.matrix.shape} does not match dimension {self.form.dim}")
        if not is_orthogonal(self.matrix, self.form.diag):
            raise PreconditionError("Matrix does not preserve the quadratic form")
        if exact_det(self.matrix) != 1:
            raise PreconditionError("Matrix has determinant -1")

    @classmethod
    def of(cls, element: SpinElement) -> "SOMatrix":
        return cls(element.matrix, element.form)

    def __mul__(self, other: "SOMatrix") -> "SOMatrix":
        return SOMatrix(self.matrix @ other.matrix, self.form)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SOMatrix):
            return NotImplemented
        return self.form == other.form and matrices_equal(self.matrix, other.matrix)

    def inverse(self) -> "SOMatrix":
        return SOMatrix(orthogonal_inverse(self.matrix, self.form.diag), self.form)

    def commutes_with(self, other: "SOMatrix") -> bool:
        return matrices_equal(self.matrix @ other.matrix, other.matrix @ self.matrix)

    def to_json(self) -> Dict[str, Any]:
        return {"form": self.form.to_dict(), "matrix": matrix_to_json(self.matrix)}


def normalize_vector(v: Sequence) -> Vector:
    """Primitive integer multiple of v whose first nonzero coordinate is positive."""
    coords = [to_rational(x) for x in v]
    scale = math.lcm(*(c.denominator for c in coords))
    ints = [int(c * scale) for c in coords]
    common = math.gcd(*ints)
    if common == 0:
        raise PreconditionError("Cannot normalize the zero vector")
    ints = [x // common for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def _require_anisotropic(form: QuadForm, a: Sequence) -> Fraction:
    norm = form.value(a)
    if norm == 0:
        raise PreconditionError(f"Vector {[str(x) for x in a]} is isotropic")
    return norm


def reflect(form: QuadForm, a: Sequence, x: Sequence) -> Vector:
    """tau_a(x) = x - (2 (x, a) / f(a)) a."""
    factor = 2 * form.bilinear(x, a) / _require_anisotropic(form, a)
    return tuple(xi - factor * ai for xi, ai in zip(x, a))


def reflection_matrix(form: QuadForm, a: Sequence) -> np.ndarray:
    """Matrix of the reflection in the hyperplane orthogonal to a."""
    a = form.vector(a)
    norm = _require_anisotropic(form, a)
    matrix = identity(form.dim)
    for i in range(form.dim):
        for j in range(form.dim):
            matrix[i, j] -= 2 * form.diag[j] * a[j] * a[i] / norm
    return matrix


def _reflect_columns(form: QuadForm, a: Vector, matrix: np.ndarray) -> np.ndarray:
    """tau_a applied to every column of matrix, in O(dim^2)."""
    norm = form.value(a)
    weights = np.array([d * x for d, x in zip(form.diag, a)], dtype=object)
    coeffs = weights @ matrix
    return matrix - np.outer(np.array(a, dtype=object), coeffs) * (Fraction(2) / norm)


def reflection_decompose(m: SOMatrix, order: Optional[Sequence[int]] = None) -> List[Vector]:
    """Vectors a_1, ..., a_2k with tau_{a_1} ... tau_{a_2k} = M.

    Basis vectors are peeled in the given order (default 1..2n). A basis
    vector whose difference with its image is isotropic costs two reflections,
    so for indefinite forms the list can be longer than the dimension.
    """
    form = m.form
    dim = form.dim
    current = m.matrix.copy()
    vectors: List[Vector] = []
    for i in (order if order is not None else range(dim)):
        e = form.basis_vector(i + 1)
        column = tuple(current[:, i])
        if column == e:
            continue
        diff = tuple(c - x for c, x in zip(column, e))
        if form.value(diff) != 0:
            steps = [normalize_vector(diff)]
        else:
            steps = [normalize_vector(tuple(c + x for c, x in zip(column, e))), e]
        for a in steps:
            current = _reflect_columns(form, a, current)
            vectors.append(a)

    if not matrices_equal(current, identity(dim)):
        raise VerificationError("Reflection peeling did not reach the identity")
    if len(vectors) % 2:
        raise VerificationError("Odd number of reflections for a determinant +1 matrix")
    logger.debug(f"Decomposed SO matrix into {len(vectors)} reflections")
    return vectors


def spinor_norm(m: SOMatrix, order: Optional[Sequence[int]] = None) -> SquareClass:
    """Square class of the product of the reflection-vector norms."""
    product = Fraction(1)
    for a in reflection_decompose(m, order):
        product *= m.form.value(a)
    return SquareClass(square_class(product))


def spin_from_vectors(form: QuadForm, vectors: Sequence[Sequence]) -> SpinElement:
    """e_{v1} ... e_{v2k} / r with r^2 = prod f(v_i); acts as tau_{v1} ... tau_{v2k}."""
    if len(vectors) % 2:
        raise PreconditionError(f"Need an even number of vectors, got {len(vectors)}")
    product = Fraction(1)
    for v in vectors:
        product *= _require_anisotropic(form, form.vector(v))
    root = rational_sqrt(product)
    if root is None:
        raise PreconditionError(f"Product of norms {product} is not a square in Q")
    return SpinElement.from_multivector(product_of_vectors(form, vectors) / root)


# ---------------------------------------------------------------------------
# Witt maps
# ---------------------------------------------------------------------------

def _perp_basis(form: QuadForm, v: Vector) -> List[Vector]:
    """Integral spanning vectors of the orthogonal complement of v."""
    weights = [d * x for d, x in zip(form.diag, v)]
    pivot = next(i for i, w in enumerate(weights) if w)
    basis = []
    for j in range(form.dim):
        if j == pivot:
            continue
        coords = [Fraction(0)] * form.dim
        coords[j] = weights[pivot]
        coords[pivot] = -weights[j]
        basis.append(normalize_vector(coords))
    # pure basis vectors first keeps the search sparse
    basis.sort(key=lambda b: sum(1 for x in b if x))
    return basis


def _perp_candidates(basis: List[Vector], bound: int) -> Iterator[Vector]:
    """Primitive integral combinations of up to four spanning vectors, by growing height."""
    span = basis[: min(4, len(basis))]
    seen = set()
    for b in basis:
        seen.add(b)
        yield b
    for radius in range(1, bound + 1):
        for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(span)):
            if max(abs(c) for c in coeffs) != radius or math.gcd(*coeffs) != 1:
                continue
            if next(c for c in coeffs if c) < 0:
                continue
            vec = tuple(sum((c * b[k] for c, b in zip(coeffs, span)), Fraction(0))
                        for k in range(len(span[0])))
            if not any(vec) or max(abs(x) for x in vec) > bound or vec in seen:
                continue
            seen.add(vec)
            yield vec


def _find_class_pair(
    form: QuadForm, basis: List[Vector], target: int, bound: int, cap: int
) -> Tuple[Vector, Vector]:
    """Two vectors of v2-perp whose norms multiply into the target square class."""
    seen: Dict[int, Vector] = {}
    for count, c in enumerate(_perp_candidates(basis, bound)):
        if count >= cap:
            break
        norm = form.value(c)
        if norm == 0:
            continue
        cls = square_class(norm)
        needed = squarefree_part(cls * target)
        if needed in seen and needed != cls:
            return c, seen[needed]
        seen.setdefault(cls, c)
    raise SearchCapExceeded(
        f"No vectors found for spinor norm class {target} within bound {bound}",
        {"needed_class": target, "bound": bound},
    )


def witt_map(
    form: QuadForm,
    v1: Sequence,
    v2: Sequence,
    bound: Optional[int] = None,
    candidate_cap: Optional[int] = None,
) -> SpinElement:
    """Spin element g with tau_g(v1) = v2 for vectors of equal nonzero norm.

    Args:
        form: Ambient quadratic form
        v1: Source vector
        v2: Target vector
        bound: Coordinate bound of the repair search (settings.witt_bound)
        candidate_cap: Number of candidates tried (settings.witt_candidates)

    Returns:
        SpinElement mapping v1 to v2
    """
    bound = bound or settings.witt_bound
    candidate_cap = candidate_cap or settings.witt_candidates
    v1, v2 = form.vector(v1), form.vector(v2)
    norm = form.value(v1)
    if norm == 0 or norm != form.value(v2):
        raise PreconditionError(f"Norm mismatch: f(v1) = {norm}, f(v2) = {form.value(v2)}")
    if v1 == v2:
        return SpinElement.identity(form)

    diff = tuple(a - b for a, b in zip(v1, v2))
    if form.value(diff) != 0:
        reflections: List[Vector] = [diff]
    else:
        reflections = [v2, tuple(a + b for a, b in zip(v1, v2))]

    basis = _perp_basis(form, v2)
    if len(reflections) % 2:
        filler = next(c for c in _perp_candidates(basis, bound) if form.value(c) != 0)
        reflections.insert(0, filler)

    product = Fraction(1)
    for a in reflections:
        product *= form.value(a)
    target = square_class(product)
    if target != 1:
        c1, c2 = _find_class_pair(form, basis, target, bound, candidate_cap)
        reflections = [c1, c2] + reflections
        logger.debug(f"Spinor norm repair for class {target} used {c1} and {c2}")

    g = spin_from_vectors(form, reflections)
    if twisted_action(g.g, v1) != v2:
        raise VerificationError("Witt map does not carry v1 to v2")
    return g


# ---------------------------------------------------------------------------
# Coroots and rotations
# ---------------------------------------------------------------------------

_COROOT_PLANES = {1: ((1, 2), (3, 4)), 2: ((3, 4), (5, 6))}
_ROOT_VECTORS = {
    1: {(1, 3): 1, (2, 3): 1, (1, 4): -1, (2, 4): -1},
    2: {(3, 5): 1, (4, 5): 1, (3, 6): -1, (4, 6): -1},
}


def _check_coroot_args(i: int, dim: int) -> None:
    if i not in _COROOT_PLANES:
        raise PreconditionError(f"Coroot index must be 1 or 2, got {i}")
    if dim < 6 or dim % 2:
        raise PreconditionError(f"Coroots need an even dimension of at least 6, got {dim}")


def coroot(i: int, t: Any, dim: int = 6) -> SpinElement:
    """h_i(t) over f_s.

    h_1(t) = (t+2+1/t)/4 + ((t-1/t)/4) e12 - ((t-1/t)/4) e34 - ((t-2+1/t)/4) e1234,
    and h_2 is the same on e34, e56.
    """
    _check_coroot_args(i, dim)
    t = to_rational(t)
    if t == 0:
        raise PreconditionError("Coroot parameter must be nonzero")
    first, second = _COROOT_PLANES[i]
    inv = 1 / t
    terms = {
        0: (t + 2 + inv) / 4,
        blade_mask(first): (t - inv) / 4,
        blade_mask(second): -(t - inv) / 4,
        blade_mask(first + second): -(t - 2 + inv) / 4,
    }
    return SpinElement.from_multivector(Multivector(QuadForm.f_s(dim), terms))


def root_vector(i: int, dim: int = 6) -> Multivector:
    """X = e13 + e23 - e14 - e24 (i = 1) or Y = e35 + e45 - e36 - e46 (i = 2)."""
    _check_coroot_args(i, dim)
    terms = {blade_mask(pair): c for pair, c in _ROOT_VECTORS[i].items()}
    return Multivector(QuadForm.f_s(dim), terms)


def adjoint_on_root(i: int, t: Any, dim: int = 6, root: Optional[int] = None) -> int:
    """Exponent c with h_i(t) X h_i(t)^-1 = t^c X for the root vector X of `root` (default i)."""
    t = to_rational(t)
    if t in (0, 1, -1):
        raise PreconditionError(f"Parameter {t} cannot detect the pairing")
    h = coroot(i, t, dim)
    x = root_vector(root or i, dim)
    conjugate = gp(gp(h.g, x), reverse(h.g))

    mask = min(x.terms)
    ratio = conjugate.coefficient(mask) / x.coefficient(mask)
    if conjugate != x.scale(ratio):
        raise VerificationError("Conjugate is not proportional to the root vector")
    for c in range(-8, 9):
        if t**c == ratio:
            return c
    raise VerificationError(f"Scaling factor {ratio} is not a small power of {t}")


def plane_rotation(form: QuadForm, i: int, j: int, u: Any) -> SpinElement:
    """x + y e_i e_j with x^2 + d_i d_j y^2 = 1 from the rational parameter u."""
    if i == j:
        raise PreconditionError("Rotation plane needs two distinct indices")
    u = to_rational(u)
    delta = form.diag[i - 1] * form.diag[j - 1]
    denom = 1 + delta * u * u
    if denom == 0:
        raise PreconditionError(f"Parameter {u} hits the excluded point of the conic")
    x, y = (1 - delta * u * u) / denom, 2 * u / denom
    return SpinElement.from_multivector(x + Multivector.e(form, i, j) * y)


# ---------------------------------------------------------------------------
# Archimedean separation
# ---------------------------------------------------------------------------

def separation(g: SpinElement) -> float:
    """Distance of tau_g from the centre {+I, -I} in operator norm.

    Only defined over f_a, where the real place is definite.
    """
    if any(d != 1 for d in g.form.diag):
        raise PreconditionError("Separation not applicable: form is not f_a")
    matrix = to_float(g.matrix)
    eye = np.eye(g.form.dim)
    return float(min(np.linalg.norm(matrix - z * eye, ord=2) for z in (1, -1)))


def is_separated(g: SpinElement, eps: float) -> bool:
    return separation(g) >= eps
