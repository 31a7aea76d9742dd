#!/usr/bin/env python3
"""
Tests for reduction mod m, isometries mod p^k and conjugacy widths.
"""

import logging
from fractions import Fraction

import numpy as np
import pytest

from spinlab.errors import PreconditionError
from spinlab.algebra.clifford import Multivector, QuadForm
from spinlab.algebra.spin import SpinElement, coroot, plane_rotation
from spinlab.constructions.congruence import (
    FiniteGroupSpec,
    ModMultivector,
    action_matrix_mod,
    check_isometry,
    conjugate_action,
    gcl_width_bfs,
    in_congruence_subgroup,
    isometry_mod,
    mod_spin_check,
    parse_element,
    reduce_mod,
    sl3_commutator,
    sl3_commutator_identity,
)

logger = logging.getLogger(__name__)


def test_reduce_mod_examples(fa6, fs6):
    assert reduce_mod(SpinElement.identity(fa6), 5).is_identity()

    h = reduce_mod(coroot(1, 3), 5)
    assert len(h.terms) == 4
    assert mod_spin_check(h) is None

    # x = 5/4, y = 3/4 over f_s; 4 is invertible mod 3
    g = plane_rotation(fs6, 1, 2, Fraction(1, 3))
    assert g.g.scalar_part() == Fraction(5, 4)
    assert reduce_mod(g, 3).terms == {0: 2}
    with pytest.raises(PreconditionError):
        reduce_mod(g, 4)


def test_in_congruence_subgroup(fa6):
    assert in_congruence_subgroup(SpinElement.identity(fa6), 3)
    assert in_congruence_subgroup(SpinElement.identity(fa6), 1)
    assert not in_congruence_subgroup(plane_rotation(fa6, 1, 2, 1), 3)

    close = Multivector.scalar(fa6) + Multivector.e(fa6, 1, 2).scale(3)
    assert in_congruence_subgroup(close, 3)
    assert not in_congruence_subgroup(close, 9)

    # denominators of 3 have no reduction mod 3
    h = coroot(1, 3)
    assert not in_congruence_subgroup(h, 3)
    assert not in_congruence_subgroup(h, 15)
    assert not in_congruence_subgroup(h, 5)
    assert in_congruence_subgroup(coroot(1, 1), 9)


def test_mod_spin_check(fa6):
    assert mod_spin_check(ModMultivector.identity(fa6, 5)) is None
    assert mod_spin_check(ModMultivector(fa6, 5, {1: 1})) == "odd grade present"
    assert mod_spin_check(ModMultivector(fa6, 5, {0: 2})) == "x x' is not 1"


def test_isometry_examples():
    small = isometry_mod(5, 1, 2)
    assert small[0, 0] == 2 and small[1, 1] == 1
    assert check_isometry(small, QuadForm.f_a(2), QuadForm.f_s(2), 5)

    lifted = isometry_mod(7, 2, 4)
    assert check_isometry(lifted, QuadForm.f_a(4), QuadForm.f_s(4), 49)

    big = isometry_mod(5, 3, 20)
    assert check_isometry(big, QuadForm.f_a(20), QuadForm.f_s(20), 125)


def test_isometry_rejects_discriminant_mismatch():
    with pytest.raises(PreconditionError):
        isometry_mod(7, 1, 2)
    with pytest.raises(PreconditionError):
        isometry_mod(3, 2, 6)
    with pytest.raises(PreconditionError):
        isometry_mod(9, 1, 4)


def test_isometry_for_every_small_prime_power():
    for p in (3, 5, 7, 11):
        for k in range(1, 5):
            matrix = isometry_mod(p, k, 20)
            assert check_isometry(matrix, QuadForm.f_a(20), QuadForm.f_s(20), p**k), (p, k)


def test_conjugate_action_carries_orthogonal_matrices():
    m = 5
    isometry = isometry_mod(5, 1, 4)
    action, _ = parse_element("r12:0:1", QuadForm.f_a(4), m)
    carried = conjugate_action(action, isometry, m)
    diag_s = np.diag([-1, 1, -1, 1]).astype(object)
    assert np.all((carried.T @ diag_s @ carried - diag_s) % m == 0)


def test_finite_group_spec_limits():
    with pytest.raises(PreconditionError):
        FiniteGroupSpec(QuadForm.f_s(4), 15)
    with pytest.raises(PreconditionError):
        FiniteGroupSpec(QuadForm.f_s(10), 3)
    with pytest.raises(PreconditionError):
        FiniteGroupSpec(QuadForm.f_s(4), 3, [ModMultivector(QuadForm.f_s(4), 3, {0: 2, 3: 1})])


def test_width_of_identity_is_zero():
    spec = FiniteGroupSpec(QuadForm.f_s(4), 3)
    matrix, lift = parse_element("id", spec.form, 3)
    report = gcl_width_bfs(spec, lift, cap=5, element_label="id")
    assert report.mode == "exact"
    assert report.width == 0
    assert report.subgroup_order == 1


def test_width_of_sign_flip_mod_three():
    spec = FiniteGroupSpec(QuadForm.f_s(4), 3)
    matrix, lift = parse_element("e12", spec.form, 3)
    assert lift is None
    report = gcl_width_bfs(spec, matrix, cap=10, element_label="e12")
    assert report.mode == "exact"
    assert report.group_order > 1
    assert report.width is not None and 1 <= report.width <= 10
    assert report.bounds == "exact"
    assert report.class_size >= 1 and report.class_size_lower_bound is None
    assert report.verified_samples > 0
    assert report.spin_convention is None


def test_width_in_both_conventions():
    spec = FiniteGroupSpec(QuadForm.f_a(4), 3)
    matrix, lift = parse_element("e12", spec.form, 3)
    report = gcl_width_bfs(spec, lift, cap=10)
    assert report.width is not None
    assert report.spin_convention is not None
    assert report.spin_convention["group_order"] >= report.group_order


def test_width_cap_zero_is_exceeded():
    spec = FiniteGroupSpec(QuadForm.f_s(4), 3)
    matrix, _ = parse_element("e12", spec.form, 3)
    report = gcl_width_bfs(spec, matrix, cap=0)
    assert report.cap_exceeded
    assert report.width is None


def test_large_modulus_is_sampled():
    spec = FiniteGroupSpec(QuadForm.f_s(4), 27)
    matrix, _ = parse_element("e12", spec.form, 27)
    report = gcl_width_bfs(spec, matrix, cap=1, seed=3)
    assert report.mode == "sampled"
    assert report.bounds == "lower"
    assert report.group_order is None
    assert report.class_size is None
    assert report.class_size_lower_bound > 1
    assert report.to_dict()["bounds"] == "lower"


def test_parse_element_errors(fa6):
    with pytest.raises(PreconditionError):
        parse_element("e11", fa6, 5)
    with pytest.raises(PreconditionError):
        parse_element("bogus", fa6, 5)
    with pytest.raises(PreconditionError):
        parse_element("r12:1:1", fa6, 3)
    with pytest.raises(PreconditionError):
        parse_element("h1:2", QuadForm.f_s(4), 5)
    matrix, lift = parse_element("h1:2", QuadForm.f_s(6), 5)
    assert lift is not None and matrix.shape == (6, 6)


def test_sl3_commutator():
    assert sl3_commutator_identity(1, 1, 5)
    assert sl3_commutator(1, 1, 5)[0, 2] == 1
    assert sl3_commutator_identity(2, 3, 7)
    assert sl3_commutator(2, 3, 7)[0, 2] == 6
    assert np.array_equal(sl3_commutator(0, 4, 9), np.eye(3, dtype=np.int64))
    assert sl3_commutator_identity(5, 8, 1)
    with pytest.raises(PreconditionError):
        sl3_commutator_identity(1, 1, 4)
    logger.info("SL_3 commutator identity holds on the pinned triples")


# Plain-tuple group arithmetic, kept apart from the numpy code under test

def _tuple_mul(a, b, m):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % m for j in range(n)) for i in range(n))


def _tuple_identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _tuple_closure(generators, m):
    identity = _tuple_identity(len(generators[0]))
    reached = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for a in frontier:
            for g in generators:
                c = _tuple_mul(a, g, m)
                if c not in reached:
                    reached.add(c)
                    fresh.append(c)
        frontier = fresh
    return reached


def _tuple_inverse(a, m):
    identity = _tuple_identity(len(a))
    previous, power = identity, a
    while power != identity:
        previous, power = power, _tuple_mul(power, a, m)
    return previous


def _subgroup_and_width(klass, m):
    """Closure of a symmetric set containing 1, and the number of factors needed."""
    reached = set(klass)
    frontier = list(klass)
    width = 1
    while True:
        fresh = set()
        for a in frontier:
            for s in klass:
                c = _tuple_mul(a, s, m)
                if c not in reached:
                    fresh.add(c)
        if not fresh:
            return reached, width
        reached |= fresh
        frontier = list(fresh)
        width += 1


@pytest.fixture(scope="module")
def split_group_mod_three():
    m = 3
    spec = FiniteGroupSpec(QuadForm.f_s(4), m)
    generators = [tuple(tuple(int(v) % m for v in row) for row in action_matrix_mod(g)) for g in spec.generators]
    group = _tuple_closure(generators, m)
    inverses = {g: _tuple_inverse(g, m) for g in group}
    central = {x for x in group if all(_tuple_mul(x, g, m) == _tuple_mul(g, x, m) for g in generators)}

    remaining = set(group) - central
    classes = []
    while remaining:
        x = min(remaining)
        klass = {_tuple_mul(_tuple_mul(g, x, m), inverses[g], m) for g in group}
        remaining -= klass
        classes.append((x, klass))
    return spec, group, inverses, classes


def test_every_noncentral_class_has_small_width(split_group_mod_three):
    spec, group, inverses, classes = split_group_mod_three
    assert 4 < len(group) <= 1000
    assert classes
    for x, klass in classes:
        gcl = klass | {inverses[y] for y in klass} | {_tuple_identity(4)}
        subgroup, width = _subgroup_and_width(gcl, 3)

        report = gcl_width_bfs(spec, np.array(x, dtype=np.int64), cap=10, element_label=str(x))
        assert report.mode == "exact"
        assert report.group_order == len(group)
        assert report.class_size == len(klass)
        assert not report.cap_exceeded
        assert report.width is not None and 1 <= report.width <= 10
        assert report.width == width
        assert report.subgroup_order == len(subgroup)
    logger.info(f"{len(classes)} non-central classes in a group of order {len(group)}")


def test_width_does_not_grow_with_a_second_element(split_group_mod_three):
    spec, group, inverses, classes = split_group_mod_three
    compared = 0
    for x, _ in classes[:5]:
        alone = gcl_width_bfs(spec, np.array(x, dtype=np.int64), cap=10)
        square = _tuple_mul(x, x, 3)
        others = [square] + [y for y, _ in classes[:5] if y != x]
        for y in others:
            joined = gcl_width_bfs(spec, np.array(x, dtype=np.int64), cap=10, extra=[np.array(y, dtype=np.int64)])
            assert joined.subgroup_order >= alone.subgroup_order
            # same subgroup, larger generating class
            if joined.subgroup_order == alone.subgroup_order:
                assert joined.width <= alone.width, (x, y)
                compared += 1
    assert compared >= len(classes[:5])
