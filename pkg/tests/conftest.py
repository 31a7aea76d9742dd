"""
Shared pytest setup for the spinlab tests.
"""

import os
import sys
import logging

import pytest

# Add parent directory to path to import spinlab modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s"
)

from spinlab.algebra.clifford import QuadForm  # noqa: E402


@pytest.fixture
def fa6():
    return QuadForm.f_a(6)


@pytest.fixture
def fs6():
    return QuadForm.f_s(6)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Route default CLI output into a temporary directory."""
    from spinlab.config.settings import settings

    monkeypatch.setattr(settings, "output_dir", str(tmp_path))
    return tmp_path
