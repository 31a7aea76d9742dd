#!/usr/bin/env python3
"""
Tests for the randomized identity suites behind ``spinlab verify``.
"""

import logging

import pytest

from spinlab.errors import PreconditionError
from spinlab.verification import SUITES, run_suite
from spinlab.verification.suites import arith_suite, clifford_suite, coroot_suite, tori_suite

logger = logging.getLogger(__name__)


def test_suite_names():
    assert set(SUITES) == {"arith", "clifford", "coroots", "steinberg", "tori"}
    with pytest.raises(PreconditionError):
        run_suite("nonsense", 0)


def test_coroot_suite():
    report = coroot_suite(seed=2, dim=6, samples=10)
    assert report.passed, report.counterexample
    assert report.tally("pairing_h2_on_X").passed == 10
    with pytest.raises(PreconditionError):
        coroot_suite(seed=2, dim=4)


def test_clifford_suite():
    report = clifford_suite(seed=5, dim=6, samples=6)
    assert report.passed, report.counterexample
    assert report.tally("witt_map").passed == 3


def test_tori_suite():
    report = tori_suite(seed=1, samples=30)
    assert report.passed, report.counterexample
    assert report.tally("gamma_unit").passed == 1


def test_arith_suite():
    report = arith_suite(seed=4, pairs=50, squares=200)
    assert report.passed, report.counterexample
    assert report.tally("four_squares").passed == 200


def test_steinberg_suite_by_name():
    report = run_suite("steinberg", 0, 6)
    assert report.passed, report.counterexample
    logger.info(f"Steinberg suite checks: {[c.name for c in report.checks]}")
