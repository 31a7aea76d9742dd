"""
Exact matrix helpers.

Matrices over Q are numpy arrays of dtype=object holding Fractions, so that
numpy's matmul, transpose and comparisons stay exact. Determinants go through
sympy's DomainMatrix over QQ.
"""

import logging
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .arith import format_rational, mod_rational, to_rational

# Set up logger
logger = logging.getLogger(__name__)


def to_matrix(rows: Iterable[Iterable]) -> np.ndarray:
    """Build an exact square matrix from nested rows of rationals."""
    data = [[to_rational(x) for x in row] for row in rows]
    matrix = np.empty((len(data), len(data[0]) if data else 0), dtype=object)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            matrix[i, j] = x
    return matrix


def identity(n: int) -> np.ndarray:
    return diagonal([1] * n)


def diagonal(entries: Sequence) -> np.ndarray:
    n = len(entries)
    matrix = np.empty((n, n), dtype=object)
    matrix.fill(Fraction(0))
    for i, d in enumerate(entries):
        matrix[i, i] = to_rational(d)
    return matrix


def from_columns(columns: Sequence[Sequence]) -> np.ndarray:
    """Matrix whose j-th column is columns[j]."""
    return to_matrix(columns).T.copy()


def matrices_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def is_orthogonal(matrix: np.ndarray, diag: Sequence) -> bool:
    """Whether M^T diag(f) M = diag(f)."""
    gram = diagonal(diag)
    return matrices_equal(matrix.T @ gram @ matrix, gram)


def exact_det(matrix: np.ndarray) -> Fraction:
    """Exact determinant of a rational matrix."""
    n = matrix.shape[0]
    rows = [[QQ(int(x.numerator), int(x.denominator)) for x in map(to_rational, row)]
            for row in matrix.tolist()]
    det = DomainMatrix(rows, (n, n), QQ).det()
    return Fraction(int(det.numerator), int(det.denominator))


def matrix_to_json(matrix: np.ndarray) -> List[List[str]]:
    return [[format_rational(x) for x in row] for row in matrix.tolist()]


def matrix_from_json(data: Sequence[Sequence[str]]) -> np.ndarray:
    return to_matrix(data)


def to_float(matrix: np.ndarray) -> np.ndarray:
    return np.array(matrix, dtype=float)


def reduce_matrix(matrix: np.ndarray, modulus: int) -> np.ndarray:
    """Entry-wise reduction of a rational matrix to an int64 residue matrix."""
    reduced = np.vectorize(lambda x: mod_rational(x, modulus), otypes=[np.int64])(matrix)
    return reduced.astype(np.int64)
