#!/usr/bin/env python3
"""
Tests for norm-one tori, trivializations and weak approximation.
"""

import logging
import random
from fractions import Fraction

import pytest

from spinlab.errors import PreconditionError
from spinlab.algebra.tori import (
    INERT,
    RAMIFIED,
    SPLIT,
    TorusElem,
    Trivialization,
    conic_point,
    gamma,
    is_integral_at,
    is_unit_in_order,
    rho_apply,
    splitting_type,
    support,
    torus_inv,
    torus_mul,
    torus_val,
    trivialize,
    weak_approx_torus,
)

logger = logging.getLogger(__name__)


def test_group_law():
    g = gamma()
    one = TorusElem.identity(7)
    assert torus_mul(one, g) == g
    assert torus_inv(g) == TorusElem(7, Fraction(3, 4), Fraction(-1, 4))
    assert torus_mul(g, torus_inv(g)).is_identity()
    assert g * g == TorusElem(7, Fraction(1, 8), Fraction(3, 8))
    assert g**3 == g * g * g
    assert g**-2 == torus_inv(g * g)


def test_elements_must_lie_on_the_conic():
    with pytest.raises(PreconditionError):
        TorusElem(7, 1, 1)
    with pytest.raises(PreconditionError):
        TorusElem(0, 1, 0)
    with pytest.raises(PreconditionError):
        gamma() * TorusElem.identity(3)


def test_gamma_is_a_unit():
    assert is_unit_in_order(gamma())
    assert is_unit_in_order(torus_inv(gamma()))
    assert not is_unit_in_order(TorusElem(7, Fraction(-87, 88), Fraction(5, 88)))


def test_splitting_type():
    assert splitting_type(7, 11) == SPLIT
    assert splitting_type(7, 3) == INERT
    assert splitting_type(7, 7) == RAMIFIED
    # t = 28 has the same squarefree part as 7
    assert splitting_type(28, 11) == SPLIT


def test_trivialize_examples():
    triv = trivialize(7, 11, 1)
    assert triv.zeta == 2
    assert trivialize(7, 3, 1) is None
    assert trivialize(7, 7, 1) is None
    with pytest.raises(PreconditionError):
        trivialize(7, 2, 1)
    lifted = trivialize(7, 11, 3)
    assert (lifted.zeta**2 + 7) % 11**3 == 0
    assert lifted.zeta % 11 in (2, 9)


def test_trivialization_validates_its_root():
    with pytest.raises(PreconditionError):
        Trivialization(7, 11, 1, 3)
    assert Trivialization.from_dict(trivialize(7, 11, 2).to_dict()) == trivialize(7, 11, 2)


def test_rho_apply_examples():
    triv = trivialize(7, 11, 1)
    assert rho_apply(TorusElem.identity(7), triv) == 1
    assert rho_apply(gamma(), triv) == 4
    assert rho_apply(gamma() * gamma(), triv) == 5
    with pytest.raises(PreconditionError):
        rho_apply(TorusElem(7, Fraction(-87, 88), Fraction(5, 88)), triv)
    with pytest.raises(PreconditionError):
        rho_apply(TorusElem.identity(3), triv)


def test_torus_valuation_examples():
    assert torus_val(gamma(), 3) == 0
    assert torus_val(TorusElem.identity(7), 11) == 0
    z = TorusElem(7, Fraction(-87, 88), Fraction(5, 88))
    assert torus_val(z, 11) == -1
    assert support(z) == [11]
    assert not is_integral_at(z, 11)
    assert is_integral_at(z, 3)


def test_conic_points():
    assert conic_point(7, 0).is_identity()
    assert conic_point(7, 1) == TorusElem(7, Fraction(-3, 4), Fraction(1, 4))
    rng = random.Random(1)
    for _ in range(100):
        t = rng.randint(1, 100)
        u = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        z = conic_point(t, u)
        assert z.x * z.x + t * z.y * z.y == 1


def test_rho_is_multiplicative():
    rng = random.Random(2)
    triv = trivialize(7, 23, 2)
    for _ in range(50):
        z1 = conic_point(7, Fraction(rng.randint(-9, 9), 2 ** rng.randint(0, 3)))
        z2 = conic_point(7, Fraction(rng.randint(-9, 9), 2 ** rng.randint(0, 3)))
        try:
            lhs = rho_apply(z1 * z2, triv)
            rhs = rho_apply(z1, triv) * rho_apply(z2, triv) % triv.modulus
        except PreconditionError:
            continue
        assert lhs == rhs


def test_weak_approx_single_prime():
    result = weak_approx_torus(7, [(11, 4, 1)])
    assert rho_apply(result.z, trivialize(7, 11, 1)) == 4
    assert result.u == -3
    assert result.z == TorusElem(7, Fraction(-31, 32), Fraction(-3, 32))

    trivial = weak_approx_torus(7, [(11, 1, 2)])
    assert rho_apply(trivial.z, trivialize(7, 11, 2)) == 1


def test_weak_approx_two_primes():
    result = weak_approx_torus(7, [(11, 3, 2), (23, 5, 1)])
    assert rho_apply(result.z, trivialize(7, 11, 2)) == 3
    assert rho_apply(result.z, trivialize(7, 23, 1)) == 5
    assert 11 not in result.support and 23 not in result.support


def test_weak_approx_target_minus_one():
    # -1 forces a parameter with the prime in its denominator
    result = weak_approx_torus(7, [(11, -1, 2)])
    assert rho_apply(result.z, trivialize(7, 11, 2)) == 11**2 - 1


def test_weak_approx_rejects_bad_constraints():
    with pytest.raises(PreconditionError):
        weak_approx_torus(7, [(3, 2, 1)])
    with pytest.raises(PreconditionError):
        weak_approx_torus(7, [(11, 22, 1)])
    with pytest.raises(PreconditionError):
        weak_approx_torus(7, [(11, 2, 1), (11, 3, 1)])
    logger.info("Weak approximation rejects inert primes, non-units and repeats")


def test_valuation_of_products():
    rng = random.Random(4)
    primes = [11, 23, 29, 37, 43, 53]
    negative = 0
    for _ in range(60):
        z1, z2 = (
            conic_point(7, Fraction(rng.randint(-40, 40), rng.randint(1, 40)))
            for _ in range(2)
        )
        product = z1 * z2
        checked = set(primes) | set(support(z1)) | set(support(z2)) | set(support(product))
        for p in sorted(checked):
            v1, v2 = torus_val(z1, p), torus_val(z2, p)
            assert torus_val(product, p) >= v1 + v2
            assert torus_val(z1.conj(), p) == v1
            assert torus_val(z1 * z1, p) == 2 * v1
            negative += v1 < 0
    # the points have split primes in their denominators
    assert negative > 0
    logger.info(f"Product valuations checked, {negative} negative valuations seen")
