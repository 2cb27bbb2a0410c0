# exactlinalg_test.py
import random
from fractions import Fraction

import pytest
import sympy

from exactlinalg import (
    SingularMatrixError,
    as_matrix,
    bareiss_rank,
    first_nonzero,
    identity,
    inverse,
    is_zero_matrix,
    mat_mul,
    mat_sub,
    to_float,
    transpose,
)


def _random_matrix(r: random.Random, rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(r.randint(-4, 4), r.randint(1, 3)) for _ in range(cols)] for _ in range(rows)]


def test_rank_agrees_with_sympy():
    r = random.Random(17)
    for _ in range(30):
        rows, cols, inner = r.randint(1, 6), r.randint(1, 6), r.randint(1, 6)
        # products of thin factors have deficient rank often enough
        a = mat_mul(_random_matrix(r, rows, inner), _random_matrix(r, inner, cols))
        assert bareiss_rank(a) == sympy.Matrix(a).rank()


def test_rank_edge_cases():
    assert bareiss_rank([]) == 0
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    assert bareiss_rank([["1/2", "1/3"], ["3/2", 1]]) == 1
    assert bareiss_rank(identity(4)) == 4


def test_inverse_is_two_sided():
    r = random.Random(2)
    for _ in range(10):
        a = _random_matrix(r, 4, 4)
        if sympy.Matrix(a).rank() < 4:
            continue
        inv = inverse(a)
        assert is_zero_matrix(mat_sub(mat_mul(a, inv), identity(4)))
        assert is_zero_matrix(mat_sub(mat_mul(inv, a), identity(4)))


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError, match="singular"):
        inverse(as_matrix([[1, 2], [2, 4]]))
    with pytest.raises(SingularMatrixError, match="non-square"):
        inverse(as_matrix([[1, 2]]))


def test_transpose_and_first_nonzero():
    a = as_matrix([[0, 0, 3], [0, 5, 0]])
    assert transpose(a) == as_matrix([[0, 0], [0, 5], [3, 0]])
    assert transpose([], 3) == [[], [], []]
    assert first_nonzero(a) == (0, 2, Fraction(3))
    assert first_nonzero(as_matrix([[0]])) is None


def test_to_float():
    assert to_float([], 2).shape == (0, 2)
    assert to_float([["1/4", 2]]).tolist() == [[0.25, 2.0]]
