"""
Reduction modulo odd m, congruence subgroups, isometries mod p^k and
conjugacy widths in finite quotients.

Finite groups are handled in two conventions. The matrix convention keys an
element by its action matrix mod m, so g and -g coincide. The Spin
convention keeps the multivector, stored as a dense residue vector over the
even blades.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix, perfect_power

from ..config.settings import settings
from ..errors import PreconditionError, VerificationError
from ..schemas.report_schemas import WidthReport
from ..algebra.arith import OIdeal, mod_rational, require_odd_prime, sqrt_mod
from ..algebra.clifford import Multivector, QuadForm, blade_indices, blade_mask, blade_product, grade
from ..algebra.spin import SpinElement, coroot

# Set up logger
logger = logging.getLogger(__name__)

MAX_GROUP_DIM = 8
MAX_GROUP_MODULUS = 27
SAMPLED_CONJUGATES = 64
SAMPLED_REACH_LIMIT = 100_000


def _check_modulus(m: int) -> int:
    if not isinstance(m, int) or m < 3 or m % 2 == 0:
        raise PreconditionError(f"Modulus must be an odd integer >= 3, got {m!r}")
    return m


def _factor_mod(factor: Any, m: int) -> int:
    factor = Fraction(factor)
    if factor.denominator == 1:
        return int(factor) % m
    return mod_rational(factor, m)


# ---------------------------------------------------------------------------
# Multivectors mod m
# ---------------------------------------------------------------------------

class ModMultivector:
    """Element of Cliff_f(Z/m) as a sparse map blade mask -> nonzero residue."""

    __slots__ = ("form", "modulus", "_terms")

    def __init__(self, form: QuadForm, modulus: int, terms: Optional[Mapping[int, int]] = None):
        self.form = form
        self.modulus = _check_modulus(modulus)
        clean = {}
        for mask, coef in (terms or {}).items():
            c = int(coef) % modulus
            if c:
                clean[mask] = c
        self._terms = clean

    @classmethod
    def identity(cls, form: QuadForm, modulus: int) -> "ModMultivector":
        return cls(form, modulus, {0: 1})

    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def key(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self._terms.items()))

    def _check(self, other: "ModMultivector") -> None:
        if self.form != other.form or self.modulus != other.modulus:
            raise PreconditionError("Multivectors differ in form or modulus")

    def __mul__(self, other: "ModMultivector") -> "ModMultivector":
        return gp_mod(self, other)

    def __add__(self, other: "ModMultivector") -> "ModMultivector":
        self._check(other)
        terms = dict(self._terms)
        for mask, c in other._terms.items():
            terms[mask] = terms.get(mask, 0) + c
        return ModMultivector(self.form, self.modulus, terms)

    def reverse(self) -> "ModMultivector":
        m = self.modulus
        return ModMultivector(
            self.form, m, {mask: c if grade(mask) % 4 in (0, 1) else -c for mask, c in self._terms.items()}
        )

    def is_even(self) -> bool:
        return all(grade(mask) % 2 == 0 for mask in self._terms)

    def is_vector(self) -> bool:
        return all(grade(mask) == 1 for mask in self._terms)

    def is_identity(self) -> bool:
        return self._terms == {0: 1}

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ModMultivector):
            return NotImplemented
        return self.form == other.form and self.modulus == other.modulus and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.form, self.modulus, self.key()))

    def __repr__(self) -> str:
        parts = [f"{c}·e{{{','.join(map(str, blade_indices(mask)))}}}" for mask, c in sorted(self._terms.items())]
        return f"ModMultivector(mod {self.modulus}: {' + '.join(parts) or '0'})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "modulus": self.modulus,
            "terms": [{"blade": list(blade_indices(mask)), "coef": c} for mask, c in sorted(self._terms.items())],
        }


def gp_mod(x: ModMultivector, y: ModMultivector) -> ModMultivector:
    """Geometric product mod m."""
    x._check(y)
    m = x.modulus
    out: Dict[int, int] = {}
    for ma, ca in x._terms.items():
        for mb, cb in y._terms.items():
            factor, mask = blade_product(ma, mb, x.form)
            out[mask] = (out.get(mask, 0) + _factor_mod(factor, m) * ca * cb) % m
    return ModMultivector(x.form, m, out)


def reduce_mod(g: Union[SpinElement, Multivector], m: int) -> ModMultivector:
    """Coefficient-wise reduction; a ring homomorphism on elements with denominators prime to m."""
    _check_modulus(m)
    x = g.g if isinstance(g, SpinElement) else g
    return ModMultivector(x.form, m, {mask: mod_rational(c, m) for mask, c in x.terms.items()})


def _basis_mod(form: QuadForm, i: int, m: int) -> ModMultivector:
    return ModMultivector(form, m, {1 << (i - 1): 1})


def mod_spin_check(x: ModMultivector) -> Optional[str]:
    """First violated mod-m Spin condition, or None."""
    if not x.is_even():
        return "odd grade present"
    x_rev = x.reverse()
    if not gp_mod(x, x_rev).is_identity():
        return "x x' is not 1"
    for i in range(1, x.form.dim + 1):
        if not gp_mod(gp_mod(x, _basis_mod(x.form, i, x.modulus)), x_rev).is_vector():
            return f"twisted action of e{i} is not grade-1"
    return None


def action_matrix_mod(x: ModMultivector) -> np.ndarray:
    """int64 matrix of v -> x v x' mod m on the basis e_1..e_n."""
    dim, m = x.form.dim, x.modulus
    matrix = np.zeros((dim, dim), dtype=np.int64)
    x_rev = x.reverse()
    for j in range(dim):
        image = gp_mod(gp_mod(x, _basis_mod(x.form, j + 1, m)), x_rev)
        if not image.is_vector():
            raise PreconditionError(f"Twisted action of e{j + 1} mod {m} is not grade-1")
        for mask, c in image.terms.items():
            matrix[mask.bit_length() - 1, j] = c
    return matrix


def in_congruence_subgroup(g: Union[SpinElement, Multivector], I: Union[OIdeal, int]) -> bool:
    """Whether g reduces to 1 modulo I.

    A coefficient whose denominator shares a factor with I has no reduction,
    so such an element is never in the subgroup.
    """
    ideal = I if isinstance(I, OIdeal) else OIdeal.generated_by(I)
    if ideal.is_unit:
        return True
    x = g.g if isinstance(g, SpinElement) else g
    if any(math.gcd(Fraction(c).denominator, ideal.m) != 1 for c in x.terms.values()):
        return False
    return reduce_mod(x, ideal.m).is_identity()


# ---------------------------------------------------------------------------
# Isometries between f_a and f_s mod p^k
# ---------------------------------------------------------------------------

def _diag_mod(form: QuadForm, m: int) -> np.ndarray:
    return np.diag([mod_rational(d, m) for d in form.diag]).astype(object)


def check_isometry(matrix: np.ndarray, source: QuadForm, target: QuadForm, m: int) -> bool:
    """Whether M^T diag(source) M = diag(target) mod m, computed with Python integers."""
    big = np.array(matrix, dtype=object)
    lhs = big.T @ _diag_mod(source, m) @ big
    return bool(np.all((lhs - _diag_mod(target, m)) % m == 0))


def isometry_mod(p: int, k: int, dim: int) -> np.ndarray:
    """Matrix M with M^T diag(f_a) M = diag(f_s) mod p^k.

    For p = 1 mod 4 the blocks are diag(i, 1) with i^2 = -1. For p = 3 mod 4
    the 4x4 blocks use x^2 + y^2 = -1, so dim must be divisible by 4: for
    dim = 2 mod 4 the discriminants of f_a and f_s differ by the non-square -1.
    """
    require_odd_prime(p)
    if k < 1:
        raise PreconditionError(f"Precision must be positive, got {k}")
    if dim < 2 or dim % 2:
        raise PreconditionError(f"Dimension must be even, got {dim}")
    m = p**k
    matrix = np.zeros((dim, dim), dtype=object)

    if p % 4 == 1:
        i = sqrt_mod(-1, p, k)
        for b in range(0, dim, 2):
            matrix[b, b] = i
            matrix[b + 1, b + 1] = 1
    else:
        if dim % 4:
            raise PreconditionError(
                f"f_a and f_s are not equivalent mod {p} in dimension {dim}: discriminants differ by -1",
                {"p": p, "dim": dim},
            )
        x = next(x for x in range(p) if sqrt_mod(-1 - x * x, p, k) is not None)
        y = sqrt_mod(-1 - x * x, p, k)
        for b in range(0, dim, 4):
            # columns: (x, y, 0, 0), e3, (-y, x, 0, 0), e4
            matrix[b, b], matrix[b + 1, b] = x, y
            matrix[b + 2, b + 1] = 1
            matrix[b, b + 2], matrix[b + 1, b + 2] = (-y) % m, x
            matrix[b + 3, b + 3] = 1

    if not check_isometry(matrix, QuadForm.f_a(dim), QuadForm.f_s(dim), m):
        raise VerificationError(f"Assembled isometry fails mod {p}^{k}")
    return matrix


def conjugate_action(action: np.ndarray, isometry: np.ndarray, m: int) -> np.ndarray:
    """M^-1 A M mod m: carries an f_a-orthogonal matrix to an f_s-orthogonal one."""
    inv = np.array(Matrix(isometry.tolist()).inv_mod(m).tolist(), dtype=object)
    return (inv @ np.array(action, dtype=object) @ isometry) % m


# ---------------------------------------------------------------------------
# Finite groups and conjugacy widths
# ---------------------------------------------------------------------------

def is_odd_prime_power(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    power = perfect_power(m)
    base = int(power[0]) if power else m
    try:
        require_odd_prime(base)
    except PreconditionError:
        return False
    return True


def plane_rotations_mod(form: QuadForm, m: int) -> List[ModMultivector]:
    """Every x + y e_i e_j mod m with y != 0 and x^2 + d_i d_j y^2 = 1."""
    rotations = []
    for i in range(1, form.dim + 1):
        for j in range(i + 1, form.dim + 1):
            delta = mod_rational(form.diag[i - 1] * form.diag[j - 1], m)
            mask = blade_mask((i, j))
            for x in range(m):
                for y in range(1, m):
                    if (x * x + delta * y * y) % m == 1:
                        rotations.append(ModMultivector(form, m, {0: x, mask: y}))
    return rotations


def reflection_pairs_mod(form: QuadForm, m: int, count: int, seed: int = 0) -> List[ModMultivector]:
    """Products a b / q(a) of random vectors with q(a) = q(b) a unit mod m.

    Plane rotations mod 3 only generate a small torus; the pairs fill out the
    rest of the quotient.
    """
    rng = random.Random(seed)
    diag = [mod_rational(d, m) for d in form.diag]

    def norm(v: List[int]) -> int:
        return sum(d * x * x for d, x in zip(diag, v)) % m

    def vector(v: List[int]) -> ModMultivector:
        return ModMultivector(form, m, {1 << i: x for i, x in enumerate(v)})

    pairs = []
    while len(pairs) < count:
        a = [rng.randrange(m) for _ in diag]
        c = norm(a)
        if math.gcd(c, m) != 1:
            continue
        b = [rng.randrange(m) for _ in diag]
        while norm(b) != c:
            b = [rng.randrange(m) for _ in diag]
        c_inv = pow(c, -1, m)
        product = gp_mod(vector(a), vector(b))
        pairs.append(ModMultivector(form, m, {mask: coef * c_inv for mask, coef in product.terms.items()}))
    return pairs


@dataclass
class FiniteGroupSpec:
    """Quotient Spin_f(Z/m) generated by verified mod-m Spin elements."""

    form: QuadForm
    modulus: int
    generators: List[ModMultivector] = field(default_factory=list)

    def __post_init__(self):
        if self.form.dim > MAX_GROUP_DIM:
            raise PreconditionError(f"Group dimension must be at most {MAX_GROUP_DIM}, got {self.form.dim}")
        if self.modulus > MAX_GROUP_MODULUS or not is_odd_prime_power(self.modulus):
            raise PreconditionError(
                f"Group modulus must be an odd prime power <= {MAX_GROUP_MODULUS}, got {self.modulus}"
            )
        if not self.generators:
            self.generators = plane_rotations_mod(self.form, self.modulus) + reflection_pairs_mod(
                self.form, self.modulus, 2 * self.form.dim
            )
        for g in self.generators:
            problem = mod_spin_check(g)
            if problem:
                raise PreconditionError(f"Generator {g!r} is not in Spin mod {self.modulus}: {problem}")

    def order_bound(self) -> int:
        """Upper bound on |O_f(Z/p^k)|, used to skip hopeless enumerations."""
        power = perfect_power(self.modulus)
        p, k = (int(power[0]), int(power[1])) if power else (self.modulus, 1)
        n = self.form.dim // 2
        bound = 2 * p ** (n * (n - 1)) * (p**n + 1)
        for i in range(1, n):
            bound *= p ** (2 * i) - 1
        return bound * p ** ((k - 1) * n * (2 * n - 1))


class _MatrixConvention:
    """Elements as action matrices mod m."""

    name = "matrix"

    def __init__(self, form: QuadForm, m: int):
        self.m = m
        self.diag = np.array([mod_rational(d, m) for d in form.diag], dtype=np.int64)
        self.diag_inv = np.array([pow(int(d), -1, m) for d in self.diag], dtype=np.int64)
        self.identity = np.eye(form.dim, dtype=np.int64)

    def lift(self, x: Union[ModMultivector, np.ndarray]) -> np.ndarray:
        if isinstance(x, ModMultivector):
            return action_matrix_mod(x)
        return np.asarray(x, dtype=np.int64) % self.m

    def key(self, a: np.ndarray) -> bytes:
        return a.tobytes()

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.m

    def inv(self, a: np.ndarray) -> np.ndarray:
        return (self.diag_inv[:, None] * a.T * self.diag[None, :]) % self.m


class _SpinConvention:
    """Elements as dense residue vectors over the even blades."""

    name = "spin"

    def __init__(self, form: QuadForm, m: int):
        self.form, self.m = form, m
        self.masks = [mask for mask in range(1 << form.dim) if grade(mask) % 2 == 0]
        index = {mask: i for i, mask in enumerate(self.masks)}
        size = len(self.masks)
        self.table = np.zeros((size, size, size), dtype=np.int64)
        for i, a in enumerate(self.masks):
            for j, b in enumerate(self.masks):
                factor, mask = blade_product(a, b, form)
                self.table[i, j, index[mask]] = _factor_mod(factor, m)
        self.signs = np.array([1 if grade(mask) % 4 == 0 else -1 for mask in self.masks], dtype=np.int64)
        self.identity = np.zeros(size, dtype=np.int64)
        self.identity[0] = 1
        self.index = index

    def lift(self, x: ModMultivector) -> np.ndarray:
        vec = np.zeros(len(self.masks), dtype=np.int64)
        for mask, c in x.terms.items():
            vec[self.index[mask]] = c
        return vec

    def key(self, a: np.ndarray) -> bytes:
        return a.tobytes()

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", a, b, self.table) % self.m

    def inv(self, a: np.ndarray) -> np.ndarray:
        return (a * self.signs) % self.m


def _enumerate_group(conv, generators: Sequence[np.ndarray], cap: int) -> Optional[Dict[bytes, np.ndarray]]:
    """Closure of the generators, or None once more than cap elements appear."""
    reached = {conv.key(conv.identity): conv.identity}
    frontier = [conv.identity]
    while frontier:
        fresh = []
        for a in frontier:
            for g in generators:
                product = conv.mul(a, g)
                k = conv.key(product)
                if k not in reached:
                    reached[k] = product
                    fresh.append(product)
                    if len(reached) > cap:
                        return None
        frontier = fresh
    return reached


def _conjugacy_set(conv, conjugators, elements) -> Tuple[Dict[bytes, np.ndarray], int]:
    """Union of conjugates of elements and their inverses, with the class size of elements[0]."""
    gcl: Dict[bytes, np.ndarray] = {}
    first_class = set()
    for g in conjugators:
        g_inv = conv.inv(g)
        for n, y in enumerate(elements):
            for z in (y, conv.inv(y)):
                c = conv.mul(conv.mul(g, z), g_inv)
                k = conv.key(c)
                gcl[k] = c
                if n == 0 and z is y:
                    first_class.add(k)
    gcl[conv.key(conv.identity)] = conv.identity
    return gcl, len(first_class)


@dataclass
class _WidthRun:
    width: Optional[int]
    layers: List[int]
    reached: Dict[bytes, np.ndarray]
    cap_exceeded: bool


def _bfs_layers(conv, gcl: Dict[bytes, np.ndarray], cap: int, reach_limit: Optional[int] = None) -> _WidthRun:
    identity_key = conv.key(conv.identity)
    reached = dict(gcl)
    if set(gcl) == {identity_key}:
        return _WidthRun(0, [1], reached, False)
    if cap < 1:
        return _WidthRun(None, [len(reached)], reached, True)

    layers = [len(reached)]
    frontier = list(gcl.values())
    depth = 1
    while True:
        fresh: Dict[bytes, np.ndarray] = {}
        for a in frontier:
            for c in gcl.values():
                product = conv.mul(a, c)
                k = conv.key(product)
                if k not in reached and k not in fresh:
                    fresh[k] = product
        if not fresh:
            return _WidthRun(depth, layers, reached, False)
        if depth + 1 > cap:
            return _WidthRun(None, layers, reached, True)
        reached.update(fresh)
        frontier = list(fresh.values())
        depth += 1
        layers.append(len(reached))
        logger.debug(f"BFS layer {depth}: {len(reached)} elements")
        if reach_limit is not None and len(reached) > reach_limit:
            return _WidthRun(None, layers, reached, True)


def _verify_closure(conv, run: _WidthRun, gcl: Dict[bytes, np.ndarray], samples: int, rng: random.Random) -> int:
    """Products of random subgroup elements with gcl elements stay in the subgroup."""
    keys = list(run.reached)
    gens = list(gcl.values())
    checked = 0
    for _ in range(min(samples, len(keys))):
        a = run.reached[rng.choice(keys)]
        if conv.key(conv.mul(a, rng.choice(gens))) not in run.reached:
            raise VerificationError("BFS closure is not closed under multiplication")
        checked += 1
    return checked


def _sampled_conjugators(conv, generators: Sequence[np.ndarray], rng: random.Random) -> List[np.ndarray]:
    samples = [conv.identity]
    for _ in range(SAMPLED_CONJUGATES):
        word = conv.identity
        for _ in range(20):
            word = conv.mul(word, rng.choice(generators))
        samples.append(word)
    return samples


def gcl_width_bfs(
    spec: FiniteGroupSpec,
    x: Union[ModMultivector, np.ndarray],
    cap: Optional[int] = None,
    extra: Sequence[Union[ModMultivector, np.ndarray]] = (),
    element_label: str = "",
    cap_group: Optional[int] = None,
    seed: int = 0,
) -> WidthReport:
    """Width of the generalized conjugacy class of x (and any extra elements).

    Args:
        spec: Finite quotient and its generators
        x: Element whose conjugacy class is measured, as a Spin element mod m
            or as an action matrix
        cap: Largest width searched (settings.cap_bfs_layers)
        extra: Further elements whose classes join gcl(x)
        element_label: Text recorded as the element in the report
        cap_group: Enumeration cap (settings.cap_group); beyond it the run is sampled
        seed: Seed for closure checks and sampled conjugators

    Returns:
        WidthReport in exact or sampled mode
    """
    cap = settings.cap_bfs_layers if cap is None else cap
    cap_group = cap_group or settings.cap_group
    rng = random.Random(seed)
    conv = _MatrixConvention(spec.form, spec.modulus)
    generators = [conv.lift(g) for g in spec.generators]
    elements = [conv.lift(y) for y in [x, *extra]]
    report = WidthReport(
        form=spec.form.name,
        dim=spec.form.dim,
        modulus=spec.modulus,
        element=element_label or repr(x),
        mode="exact",
        cap=cap,
    )

    group = None
    if spec.order_bound() <= cap_group:
        group = _enumerate_group(conv, generators, cap_group)

    if group is None:
        logger.warning(f"Group mod {spec.modulus} exceeds {cap_group} elements; sampling conjugates")
        conjugators = _sampled_conjugators(conv, generators, rng)
        gcl, class_size = _conjugacy_set(conv, conjugators, elements)
        run = _bfs_layers(conv, gcl, cap, reach_limit=SAMPLED_REACH_LIMIT)
        report.mode = "sampled"
        report.bounds = "lower"
        report.class_size_lower_bound = class_size
        report.layers = run.layers
        report.cap_exceeded = run.cap_exceeded
        return report

    gcl, class_size = _conjugacy_set(conv, list(group.values()), elements)
    run = _bfs_layers(conv, gcl, cap)
    report.group_order = len(group)
    report.class_size = class_size
    report.layers = run.layers
    report.width = run.width
    report.cap_exceeded = run.cap_exceeded
    report.subgroup_order = None if run.cap_exceeded else len(run.reached)
    if not run.cap_exceeded:
        report.verified_samples = _verify_closure(conv, run, gcl, 20, rng)
    logger.info(f"Width BFS mod {spec.modulus}: group order {len(group)}, class size {class_size}, "
                f"width {run.width}")

    if len(group) <= settings.dual_convention_limit and not run.cap_exceeded:
        report.spin_convention = _spin_convention_run(spec, [x, *extra], cap, cap_group, run.width)
    return report


def _spin_convention_run(
    spec: FiniteGroupSpec, elements: Sequence[Any], cap: int, cap_group: int, matrix_width: Optional[int]
) -> Optional[Dict[str, Any]]:
    """Rerun in the Spin convention, where g and -g are distinct."""
    if any(not isinstance(y, ModMultivector) or mod_spin_check(y) for y in elements):
        return None
    conv = _SpinConvention(spec.form, spec.modulus)
    group = _enumerate_group(conv, [conv.lift(g) for g in spec.generators], 2 * cap_group)
    if group is None:
        return None
    gcl, class_size = _conjugacy_set(conv, list(group.values()), [conv.lift(y) for y in elements])
    run = _bfs_layers(conv, gcl, cap)
    return {
        "group_order": len(group),
        "class_size": class_size,
        "width": run.width,
        "layers": run.layers,
        "cap_exceeded": run.cap_exceeded,
        "width_changed": run.width != matrix_width,
    }


# ---------------------------------------------------------------------------
# Element labels
# ---------------------------------------------------------------------------

def parse_element(label: str, form: QuadForm, m: int) -> Tuple[np.ndarray, Optional[ModMultivector]]:
    """Action matrix mod m and, when it exists, a Spin lift for an element label.

    Labels: "id", "eIJ" (tau_{e_I} tau_{e_J}), "rIJ:x:y" (x + y e_I e_J) and
    "hI:t" (the coroot h_I(t), dim >= 6). Indices are single digits.
    """
    _check_modulus(m)
    text = label.strip()
    try:
        if text == "id":
            x = ModMultivector.identity(form, m)
            return action_matrix_mod(x), x
        if text.startswith("e") and len(text) == 3:
            i, j = int(text[1]), int(text[2])
            _check_indices(form, i, j)
            matrix = np.eye(form.dim, dtype=np.int64)
            matrix[i - 1, i - 1] = matrix[j - 1, j - 1] = m - 1
            lift = None
            if form.diag[i - 1] * form.diag[j - 1] == 1:
                lift = ModMultivector(form, m, {blade_mask((i, j)): 1})
            return matrix, lift
        if text.startswith("r"):
            head, xs, ys = text.split(":")
            i, j = int(head[1]), int(head[2])
            _check_indices(form, i, j)
            x = ModMultivector(form, m, {0: int(xs), blade_mask((i, j)): int(ys)})
        elif text.startswith("h"):
            head, ts = text.split(":")
            x = reduce_mod(coroot(int(head[1:]), Fraction(ts), form.dim), m)
            if x.form != form:
                raise PreconditionError("Coroot elements live over f_s")
        else:
            raise ValueError(text)
    except (ValueError, IndexError) as e:
        if isinstance(e, PreconditionError):
            raise
        raise PreconditionError(f"Cannot parse element {label!r}") from e

    problem = mod_spin_check(x)
    if problem:
        raise PreconditionError(f"Element {label!r} is not in Spin mod {m}: {problem}")
    return action_matrix_mod(x), x


def _check_indices(form: QuadForm, i: int, j: int) -> None:
    if i == j or not (1 <= i <= form.dim and 1 <= j <= form.dim):
        raise PreconditionError(f"Indices {i}, {j} are not two distinct basis indices of dimension {form.dim}")


# ---------------------------------------------------------------------------
# SL_3 commutators
# ---------------------------------------------------------------------------

def elementary(i: int, j: int, t: int, m: int) -> np.ndarray:
    """e_{i,j}(t) in SL_3(Z/m), 1-based."""
    matrix = np.eye(3, dtype=np.int64)
    matrix[i - 1, j - 1] = t % m
    return matrix


def sl3_commutator(t: int, s: int, m: int) -> np.ndarray:
    """[e_{1,2}(t), e_{2,3}(s)] mod m."""
    a, b = elementary(1, 2, t, m), elementary(2, 3, s, m)
    a_inv, b_inv = elementary(1, 2, -t, m), elementary(2, 3, -s, m)
    return (((a @ b) % m @ a_inv) % m @ b_inv) % m


def sl3_commutator_identity(t: int, s: int, m: int) -> bool:
    """Whether [e_{1,2}(t), e_{2,3}(s)] = e_{1,3}(st) in SL_3(Z/m)."""
    if m < 1 or m % 2 == 0:
        raise PreconditionError(f"Modulus must be odd and positive, got {m}")
    return bool(np.all((sl3_commutator(t, s, m) - elementary(1, 3, t * s, m)) % m == 0))
