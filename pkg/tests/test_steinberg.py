#!/usr/bin/env python3
"""
Tests for symbols of commuting pairs in the spin extension.
"""

import logging
from fractions import Fraction

import pytest

from spinlab.errors import PreconditionError
from spinlab.algebra.clifford import Multivector, QuadForm
from spinlab.algebra.linalg import diagonal, identity
from spinlab.algebra.spin import SOMatrix, plane_rotation, reflection_matrix
from spinlab.constructions.steinberg import (
    SymbolValue,
    ThetaElement,
    gen_symbol,
    reflection_pair,
    reflection_triple_symbol,
    steinberg_symbol,
    symbol_property_suite,
    theta_lift,
)

logger = logging.getLogger(__name__)


def test_theta_lift_examples(fa6):
    assert theta_lift(ThetaElement.identity(fa6)).g in (1, -1)
    lift = theta_lift(ThetaElement(SOMatrix(diagonal([-1, -1, 1, 1, 1, 1]), fa6)))
    e12 = Multivector.e(fa6, 1, 2)
    assert lift.g in (e12, -e12)


def test_theta_rejects_nontrivial_spinor_norm(fa6):
    m = reflection_matrix(fa6, fa6.basis_vector(1)) @ reflection_matrix(fa6, (1, 1, 0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        ThetaElement(SOMatrix(m, fa6))


def test_gen_symbol_with_identity(fs6):
    m = reflection_pair(fs6, 2, 4)
    one = ThetaElement.identity(fs6)
    assert gen_symbol(one, m) == SymbolValue.PLUS
    assert gen_symbol(m, one) == SymbolValue.PLUS


def test_reflection_triple_is_minus_one():
    assert reflection_triple_symbol() == SymbolValue.MINUS
    assert reflection_triple_symbol(8) == SymbolValue.MINUS


def test_disjoint_blocks_give_plus_one():
    form = QuadForm.f_a(8)
    left = ThetaElement.from_spin(plane_rotation(form, 1, 2, Fraction(1, 2)) * plane_rotation(form, 3, 4, 2))
    right = ThetaElement.from_spin(plane_rotation(form, 5, 6, Fraction(1, 3)) * plane_rotation(form, 7, 8, 3))
    assert gen_symbol(left, right) == SymbolValue.PLUS
    assert gen_symbol(right, left) == SymbolValue.PLUS


def test_gen_symbol_needs_commuting_arguments(fa6):
    a = ThetaElement.from_spin(plane_rotation(fa6, 1, 2, Fraction(1, 2)))
    b = ThetaElement.from_spin(plane_rotation(fa6, 2, 3, Fraction(1, 2)))
    with pytest.raises(PreconditionError):
        gen_symbol(a, b)


def test_steinberg_relation():
    for a in (Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-1)):
        assert steinberg_symbol(a, 1 - a) == SymbolValue.PLUS


def test_symbol_property_suite():
    report = symbol_property_suite(seed=1, dim=6, pairs=10, conjugations=3)
    assert report.passed, report.counterexample
    assert report.extras["reflection_triple_symbol"] == -1
    with pytest.raises(PreconditionError):
        symbol_property_suite(seed=1, dim=4)


def test_identity_matrix_is_in_theta(fs6):
    assert ThetaElement(SOMatrix(identity(6), fs6)).vectors == []
    logger.info("Identity has an empty reflection decomposition")
