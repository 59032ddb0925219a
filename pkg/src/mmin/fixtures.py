"""Embedded 10x10 test matrices.

``ex1`` is an M-matrix that is neither strictly nor weakly chained diagonally
dominant (row 10 has diagonal 37.9 against an off-diagonal mass of 38).
``ex2`` is strictly diagonally dominant (row 10: 38.1 against 38).
``ex3`` has ``a_ii = 10`` and ``a_ij = -1``; its minimum eigenvalue is 1.
"""

from __future__ import annotations

import numpy as np

__all__ = ["FIXTURES", "fixture", "uniform_matrix"]

_EX1 = [
    [27, -2, -4, -1, -3, -3, -4, -5, -1, -3],
    [-2, 34, -13, -2, -4, -2, -5, 0, -3, -2],
    [-3, -5, 34, -6, -4, -3, -5, -2, -3, -2],
    [0, -3, -4, 38, -13, -4, -1, -4, -3, -5],
    [-3, -3, -1, -11, 41, -9, -2, -3, -4, -4],
    [-3, -5, -2, -3, -6, 35, -1, -5, -5, -4],
    [-5, -2, 0, -5, 0, -7, 34, -8, -1, -5],
    [-1, -4, -3, -2, -5, -1, -9, 32, -1, -5],
    [-4, -4, -2, -4, -4, -3, -2, -1, 33, -8],
    [-5, -5, -4, -3, -1, -2, -4, -3, -11, 37.9],
]

_EX2 = [
    [41, -12, -1, -5, -3, -3, -4, -4, -3, -3],
    [-9, 42, -15, -2, 0, -4, 0, -3, -4, -4],
    [-1, -5, 43, -13, -3, -3, -5, -4, -4, -4],
    [-3, -5, -6, 36, -9, -4, -3, -1, 0, -4],
    [-4, -3, -5, -2, 34, -10, -2, -1, -4, -2],
    [-3, -1, -4, -2, -1, 37, -15, -5, -2, -3],
    [-5, -2, -2, -2, -4, -2, 35, -8, -5, -4],
    [-5, -5, -1, -4, -5, -3, 0, 33, -6, -3],
    [-5, -3, -4, -3, -3, -2, -2, -3, 37, -11],
    [-3, -5, -4, -2, -5, -5, -3, -3, -8, 38.1],
]


def uniform_matrix(n: int, diagonal: float, offdiagonal: float) -> np.ndarray:
    A = np.full((n, n), float(offdiagonal))
    np.fill_diagonal(A, float(diagonal))
    return A


FIXTURES = {
    "ex1": lambda: np.array(_EX1, dtype=float),
    "ex2": lambda: np.array(_EX2, dtype=float),
    "ex3": lambda: uniform_matrix(10, 10.0, -1.0),
}


def fixture(name: str) -> np.ndarray:
    """Fresh copy of a named fixture matrix."""
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
