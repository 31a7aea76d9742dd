#!/usr/bin/env python3
"""
Tests for Spin membership, reflections, spinor norms, Witt maps and coroots.
"""

import logging
import math
import random
from fractions import Fraction

import pytest

from spinlab.errors import NotSpinError, PreconditionError
from spinlab.algebra.clifford import Multivector, QuadForm, gp, reverse, twisted_action
from spinlab.algebra.linalg import diagonal, exact_det, identity, is_orthogonal, matrices_equal
from spinlab.algebra.spin import (
    SOMatrix,
    SpinElement,
    adjoint_on_root,
    coroot,
    is_separated,
    plane_rotation,
    reflect,
    reflection_decompose,
    reflection_matrix,
    root_vector,
    separation,
    spin_from_vectors,
    spinor_norm,
    witt_map,
)

logger = logging.getLogger(__name__)


def _random_spin(rng, form, rotations=3):
    g = SpinElement.identity(form)
    for _ in range(rotations):
        i, j = rng.sample(range(1, form.dim + 1), 2)
        u = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
        try:
            g = g * plane_rotation(form, i, j, u)
        except PreconditionError:
            continue
    return g


def test_spin_element_rejects_odd_elements(fa6):
    with pytest.raises(NotSpinError):
        SpinElement.from_multivector(Multivector.e(fa6, 1))


def test_spin_from_vectors_examples(fa6):
    e1, e2 = fa6.basis_vector(1), fa6.basis_vector(2)
    assert spin_from_vectors(fa6, []).g == 1
    assert spin_from_vectors(fa6, [e1, e2]).g == Multivector.e(fa6, 1, 2)
    assert spin_from_vectors(fa6, [e1, fa6.basis_vector(1, 3)]).g in (1, -1)
    with pytest.raises(PreconditionError):
        spin_from_vectors(fa6, [e1])
    with pytest.raises(PreconditionError):
        spin_from_vectors(fa6, [e1, (1, 1, 0, 0, 0, 0)])


def test_reflection_matrix(fa6):
    assert matrices_equal(reflection_matrix(fa6, fa6.basis_vector(1)), diagonal([-1, 1, 1, 1, 1, 1]))
    a = (1, 1, 0, 0, 0, 0)
    b = (1, -1, 0, 0, 0, 0)
    assert reflect(fa6, a, a) == tuple(-Fraction(x) for x in a)
    assert reflect(fa6, a, b) == tuple(Fraction(x) for x in b)
    assert is_orthogonal(reflection_matrix(fa6, a), fa6.diag)


def test_reflection_rejects_isotropic(fs6):
    with pytest.raises(PreconditionError):
        reflection_matrix(fs6, (1, 1, 0, 0, 0, 0))


def test_reflection_decompose_examples(fa6):
    assert reflection_decompose(SOMatrix(identity(6), fa6)) == []
    m = SOMatrix(diagonal([-1, -1, 1, 1, 1, 1]), fa6)
    assert reflection_decompose(m) == [fa6.basis_vector(1), fa6.basis_vector(2)]


def test_reflection_round_trip():
    rng = random.Random(6)
    for form in (QuadForm.f_a(6), QuadForm.f_s(6)):
        for _ in range(30):
            g = _random_spin(rng, form)
            product = identity(form.dim)
            for a in reflection_decompose(SOMatrix.of(g)):
                product = product @ reflection_matrix(form, a)
            assert matrices_equal(product, g.matrix)


def test_so_matrix_checks(fa6):
    with pytest.raises(PreconditionError):
        SOMatrix(diagonal([-1, 1, 1, 1, 1, 1]), fa6)
    with pytest.raises(PreconditionError):
        SOMatrix(diagonal([2, 1, 1, 1, 1, 1]), fa6)


def test_spinor_norm_examples(fa6, fs6):
    assert spinor_norm(SOMatrix(identity(6), fa6)).is_trivial
    assert spinor_norm(SOMatrix(diagonal([-1, -1, 1, 1, 1, 1]), fa6)).representative == 1

    v = fs6.basis_vector(1)
    w = (0, 1, 0, 1, 0, 0)
    assert fs6.value(v) == -1 and fs6.value(w) == 2
    m = SOMatrix(reflection_matrix(fs6, v) @ reflection_matrix(fs6, w), fs6)
    assert spinor_norm(m).representative == -2


def test_spinor_norm_of_spin_elements_is_trivial():
    rng = random.Random(12)
    for form in (QuadForm.f_a(6), QuadForm.f_s(6)):
        for _ in range(40):
            so = SOMatrix.of(_random_spin(rng, form))
            order = list(range(form.dim))
            rng.shuffle(order)
            assert spinor_norm(so) == spinor_norm(so, order)
            assert spinor_norm(so).is_trivial


def test_witt_map_examples(fa6):
    v = (1, 2, 0, 0, 0, 0)
    assert witt_map(fa6, v, v).g == 1
    e1, e2 = fa6.basis_vector(1), fa6.basis_vector(2)
    g = witt_map(fa6, e1, e2)
    assert twisted_action(g.g, e1) == e2
    with pytest.raises(PreconditionError):
        witt_map(fa6, e1, fa6.basis_vector(2, 2))


def _form_preserving_shuffle(rng, form, v):
    """Signed permutation of v within blocks of equal diagonal entries."""
    out = list(v)
    for d in set(form.diag):
        slots = [i for i, x in enumerate(form.diag) if x == d]
        values = [v[i] for i in slots]
        rng.shuffle(values)
        for i, x in zip(slots, values):
            out[i] = x if rng.random() < 0.5 else -x
    return tuple(out)


def test_witt_map_random_pairs():
    rng = random.Random(9)
    for form in (QuadForm.f_a(6), QuadForm.f_s(6)):
        for _ in range(20):
            v1 = tuple(Fraction(rng.randint(-3, 3)) for _ in range(form.dim))
            if form.value(v1) == 0:
                continue
            v2 = _form_preserving_shuffle(rng, form, v1)
            g = witt_map(form, v1, v2)
            assert twisted_action(g.g, v1) == v2
            assert exact_det(g.matrix) == 1


def test_coroot_examples():
    assert coroot(1, 1).g == 1
    assert coroot(1, 4) * coroot(1, 9) == coroot(1, 36)
    assert coroot(1, 2).commutes_with(coroot(2, 3))
    assert coroot(2, Fraction(1, 2)) * coroot(2, 2) == SpinElement.identity(QuadForm.f_s(6))
    with pytest.raises(PreconditionError):
        coroot(1, 2, dim=4)
    with pytest.raises(PreconditionError):
        coroot(3, 2)
    with pytest.raises(PreconditionError):
        coroot(1, 0)


def test_coroot_conjugation_on_root_vectors():
    h = coroot(1, 2)
    x = root_vector(1)
    assert gp(gp(h.g, x), reverse(h.g)) == x.scale(4)
    assert adjoint_on_root(1, 2) == 2
    assert adjoint_on_root(2, 3) == 2
    assert adjoint_on_root(2, 5, root=1) == -1
    assert adjoint_on_root(1, Fraction(2, 3), dim=8) == 2
    with pytest.raises(PreconditionError):
        adjoint_on_root(1, -1)


def test_plane_rotation_is_orthogonal(fs6):
    g = plane_rotation(fs6, 1, 4, Fraction(1, 3))
    assert is_orthogonal(g.matrix, fs6.diag)
    assert (g * g.inverse()).g == 1
    with pytest.raises(PreconditionError):
        plane_rotation(fs6, 1, 2, 1)


def test_separation(fa6):
    assert separation(SpinElement.identity(fa6)) == 0
    assert math.isclose(separation(SpinElement.from_multivector(Multivector.e(fa6, 1, 2))), 2, abs_tol=1e-9)

    # u = tan(theta/4) gives a rotation by theta; here sin(theta/2) = 3/5
    g = plane_rotation(fa6, 1, 2, Fraction(1, 3))
    assert math.isclose(separation(g), 2 * 0.6, abs_tol=1e-9)
    assert is_separated(g, 1.0)
    assert not is_separated(g, 1.5)
    assert not is_separated(SpinElement.identity(fa6), 0.1)
    with pytest.raises(PreconditionError):
        separation(coroot(1, 2))
    logger.info("Separation matches the closed form")
