#!/usr/bin/env python3
"""
Tests for exact arithmetic over Q and Z[1/2].
"""

import logging
import math
import random
from fractions import Fraction

import pytest

from spinlab.errors import PreconditionError
from spinlab.algebra.arith import (
    INF,
    OIdeal,
    crt,
    factor,
    format_rational,
    four_squares,
    hilbert_symbol,
    hilbert_symbol_search,
    ideal_ops,
    is_square,
    legendre,
    mod_rational,
    parse_rational,
    relevant_places,
    sqrt_mod,
    square_class,
    squarefree_part,
    symmetric_residue,
    val,
)

logger = logging.getLogger(__name__)


def test_val_examples():
    assert val(Fraction(9, 2), 3) == 2
    assert val(0, 5) == INF
    assert val(Fraction(2, 27), 3) == -3


def test_val_properties():
    rng = random.Random(3)
    for _ in range(200):
        r = Fraction(rng.randint(1, 10**4), rng.randint(1, 10**4))
        s = Fraction(rng.randint(1, 10**4), rng.randint(1, 10**4))
        p = rng.choice([3, 5, 7, 11])
        assert val(r * s, p) == val(r, p) + val(s, p)
        if r + s != 0:
            assert val(r + s, p) >= min(val(r, p), val(s, p))
            if val(r, p) != val(s, p):
                assert val(r + s, p) == min(val(r, p), val(s, p))


def test_sqrt_mod_examples():
    assert sqrt_mod(4, 11, 1) == 2
    assert sqrt_mod(2, 7, 2) == 10
    assert sqrt_mod(3, 5, 1) is None


def test_sqrt_mod_canonical_and_lifted():
    rng = random.Random(11)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 13, 17, 41, 97])
        k = rng.randint(1, 5)
        a = rng.randint(1, 10**6)
        if a % p == 0:
            continue
        root = sqrt_mod(a, p, k)
        if root is None:
            assert legendre(a, p) == -1
            continue
        m = p**k
        assert (root * root - a) % m == 0
        assert 0 < root < m / 2


def test_sqrt_mod_rejects_multiples_of_p():
    with pytest.raises(PreconditionError):
        sqrt_mod(10, 5, 1)


def test_crt_examples():
    assert crt([(2, 3), (3, 5)]) == 8
    assert crt([(0, 7)]) == 0
    assert crt([(1, 3), (1, 5), (1, 7)]) == 1


def test_crt_rejects_common_factor():
    with pytest.raises(PreconditionError):
        crt([(1, 3), (2, 9)])


def test_hilbert_symbol_examples():
    for b in (2, -3, 7, Fraction(5, 3)):
        for v in ("inf", 2, 3, 5):
            assert hilbert_symbol(1, b, v) == 1
    assert hilbert_symbol(3, 5, 5) == -1
    assert hilbert_symbol(-1, -1, "∞") == -1
    assert hilbert_symbol(-1, -1, 2) == -1


def test_hilbert_product_formula():
    rng = random.Random(5)
    for _ in range(200):
        a = rng.choice((-1, 1)) * rng.randint(1, 10**4)
        b = rng.choice((-1, 1)) * rng.randint(1, 10**4)
        product = math.prod(hilbert_symbol(a, b, v) for v in relevant_places(a, b))
        assert product == 1, (a, b)


def test_hilbert_two_routes_agree():
    rng = random.Random(8)
    for _ in range(200):
        a = rng.choice((-1, 1)) * rng.randint(1, 500)
        b = rng.choice((-1, 1)) * rng.randint(1, 500)
        assert hilbert_symbol(a, b, 2) == hilbert_symbol_search(a, b), (a, b)


def test_hilbert_rejects_zero():
    with pytest.raises(PreconditionError):
        hilbert_symbol(0, 3, 5)


def test_four_squares():
    assert four_squares(0) == (0, 0, 0, 0)
    assert four_squares(1) == (1, 0, 0, 0)
    assert four_squares(7) == (2, 1, 1, 1)
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randrange(10**6)
        assert sum(c * c for c in four_squares(n)) == n
    big = 10**12 + 39
    assert sum(c * c for c in four_squares(big)) == big


def test_ideal_ops():
    ops = ideal_ops(OIdeal(3), OIdeal(5))
    assert ops["product"] == OIdeal(15)
    assert ops["power"] == OIdeal(3)
    assert ideal_ops(OIdeal(3), OIdeal(5), k=4)["power"] == OIdeal(81)
    assert ideal_ops(OIdeal(9), OIdeal(15), k=0)["power"].is_unit
    assert set(ops) == {"product", "sum", "intersection", "power"}
    assert OIdeal(9).sum(OIdeal(15)) == OIdeal(3)
    assert OIdeal(3).power(4) == OIdeal(81)
    assert OIdeal(3).power(0).is_unit
    assert OIdeal(9).intersection(OIdeal(15)) == OIdeal(45)
    assert OIdeal(9).intersection(OIdeal(15)).val(3) == max(OIdeal(9).val(3), OIdeal(15).val(3))


def test_ideal_generator_ignores_two():
    assert OIdeal.generated_by(24) == OIdeal(3)
    assert OIdeal(15).contains(Fraction(45, 4))
    assert not OIdeal(15).contains(Fraction(5, 3))
    with pytest.raises(PreconditionError):
        OIdeal(4)


def test_rational_helpers():
    assert format_rational(3) == "3/1"
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert mod_rational(Fraction(1, 4), 11) == 3
    assert symmetric_residue(10, 11) == -1
    assert squarefree_part(-12) == -3
    assert square_class(Fraction(8, 9)) == 2
    with pytest.raises(PreconditionError):
        parse_rational("1/0")
    logger.info("Rational helpers behave as documented")


def test_squares_and_factors():
    assert is_square(Fraction(9, 4))
    assert is_square(0)
    assert not is_square(-4)
    assert not is_square(Fraction(2, 9))
    assert factor(-360) == {2: 3, 3: 2, 5: 1}
    with pytest.raises(PreconditionError):
        factor(0)
