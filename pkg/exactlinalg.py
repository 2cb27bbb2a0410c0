# exactlinalg.py
"""Small exact linear algebra over ``Fraction`` (lists of rows)."""
from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from exactpoly import as_rational

logger = logging.getLogger(__name__)

Matrix = list[list[Fraction]]


class SingularMatrixError(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[as_rational(v) for v in row] for row in rows]


def shape(a: Sequence[Sequence[object]]) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def transpose(a: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    rows, cols = shape(a)
    if rows == 0:
        return [[] for _ in range(ncols or 0)]
    return [[a[i][j] for i in range(rows)] for j in range(cols)]


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb and ra:
        raise ValueError(f"shape mismatch {ra}x{ca} @ {rb}x{cb}")
    return [
        [sum((a[i][k] * b[k][j] for k in range(ca)), Fraction(0)) for j in range(cb)]
        for i in range(ra)
    ]


def mat_vec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((row[k] * v[k] for k in range(len(v))), Fraction(0)) for row in a]


def mat_add(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} + {shape(b)}")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} - {shape(b)}")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Sequence[Sequence[Fraction]], factor: object) -> Matrix:
    f = as_rational(factor)
    return [[x * f for x in row] for row in a]


def is_zero_matrix(a: Sequence[Sequence[Fraction]]) -> bool:
    return all(x == 0 for row in a for x in row)


def first_nonzero(a: Sequence[Sequence[Fraction]]) -> tuple[int, int, Fraction] | None:
    for i, row in enumerate(a):
        for j, x in enumerate(row):
            if x != 0:
                return i, j, x
    return None


def bareiss_rank(a: Sequence[Sequence[object]]) -> int:
    """Rank by fraction-free elimination.

    Rows are first scaled to integers by the lcm of their denominators, which
    does not change the rank.
    """
    rows = []
    for row in a:
        fr = [as_rational(v) for v in row]
        scale = lcm(*(x.denominator for x in fr)) if fr else 1
        rows.append([int(x * scale) for x in fr])
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if m == 0 or n == 0:
        return 0

    rank = 0
    prev = 1
    for col in range(n):
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                # exact division is guaranteed by Sylvester's identity
                rows[r][c] = (rows[r][c] * p - rows[r][col] * rows[rank][c]) // prev
            rows[r][col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def inverse(a: Sequence[Sequence[object]]) -> Matrix:
    """Exact Gauss-Jordan inverse."""
    n, cols = shape(a)
    if n != cols:
        raise SingularMatrixError(f"cannot invert a non-square {n}x{cols} matrix")
    aug = [[as_rational(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {col})")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def to_float(a: Sequence[Sequence[object]], ncols: int | None = None) -> np.ndarray:
    if not a:
        return np.zeros((0, ncols or 0))
    return np.array([[float(as_rational(x)) for x in row] for row in a], dtype=float)
