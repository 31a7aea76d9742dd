#!/usr/bin/env python3
"""
Test runner for the spinlab system.
"""

import os
import sys
import time
import logging

import pytest

# Add parent directory to path to import spinlab modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(),
        logging.FileHandler('test_results.log')
    ]
)
logger = logging.getLogger(__name__)

# One test module per package module, bottom-up
TEST_MODULES = [
    "test_arith.py",
    "test_clifford.py",
    "test_spin.py",
    "test_tori.py",
    "test_approx.py",
    "test_steinberg.py",
    "test_congruence.py",
    "test_certificates.py",
    "test_suites.py",
    "test_cli.py",
]


class _Tally:
    """pytest plugin counting test outcomes."""

    def __init__(self):
        self.passed = 0
        self.failed = 0

    def pytest_runtest_logreport(self, report):
        if report.when == "call" or (report.when == "setup" and report.failed):
            if report.passed:
                self.passed += 1
            elif report.failed:
                self.failed += 1


def run_tests():
    """Run all tests for the spinlab system."""
    start_time = time.time()

    logger.info("Running all tests...")
    here = os.path.dirname(os.path.abspath(__file__))
    tally = _Tally()
    exit_status = pytest.main(["-q", *[os.path.join(here, name) for name in TEST_MODULES]], plugins=[tally])

    duration = time.time() - start_time

    logger.info("\n============================================================")
    logger.info("TEST SUMMARY REPORT")
    logger.info("============================================================")
    logger.info(f"Total Tests: {tally.passed + tally.failed}")
    logger.info(f"Passed: {tally.passed}")
    logger.info(f"Failed: {tally.failed}")

    if tally.passed + tally.failed > 0:
        success_rate = (tally.passed / (tally.passed + tally.failed)) * 100
        logger.info(f"Success Rate: {success_rate:.1f}%")

    logger.info(f"Total Duration: {duration:.2f}s")

    return int(exit_status)


if __name__ == "__main__":
    sys.exit(run_tests())
