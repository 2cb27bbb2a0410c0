# liealg_test.py
import dataclasses
import random
from fractions import Fraction

import numpy as np
import pytest

from exactlinalg import mat_mul, mat_scale, mat_sub
from liealg import (
    COADJOINT_CONVENTIONS,
    LieAlgebraData,
    LieAlgebraError,
    ad_operator,
    adjoint_by_conjugation,
    adjoint_by_series,
    check_lie_axioms,
    coad_operator,
    exponential_residual,
    exponentiate,
    expm,
    sample_group,
)

SO3_ENTRIES = [(3, 1, 2, 1), (3, 2, 1, -1), (1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1), (2, 1, 3, -1)]


def test_so3_axioms(so3):
    report = check_lie_axioms(so3.lie)
    assert report.ok
    assert report.antisymmetry_ok and report.jacobi_ok and report.rep_ok


def test_bracket_and_ad(so3):
    lie = so3.lie
    assert lie.bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
    assert ad_operator(lie, [1, 0, 0]) == [[0, 0, 0], [0, 0, -1], [0, 1, 0]]


def test_coadjoint_conventions(so3):
    minus = coad_operator(so3.lie, [0, 1, 0])
    plus = coad_operator(so3.lie, [0, 1, 0], "plus_transpose")
    assert minus == [[-v for v in row] for row in plus]
    with pytest.raises(LieAlgebraError, match="unknown coadjoint"):
        coad_operator(so3.lie, [0, 1, 0], "sideways")


def test_without_rep_the_homomorphism_check_is_not_run():
    lie = LieAlgebraData.from_sparse(3, SO3_ENTRIES)
    report = check_lie_axioms(lie)
    assert report.rep_ok is None
    assert report.ok


def test_perturbed_structure_constant_breaks_axioms():
    lie = LieAlgebraData.from_sparse(3, SO3_ENTRIES + [(3, 1, 2, 1)])
    report = check_lie_axioms(lie)
    assert not report.antisymmetry_ok
    assert report.witnesses["antisymmetry"][0] == (3, 1, 2)


def test_perturbed_rep_entry_breaks_homomorphism(so3):
    rep = [[list(row) for row in a] for a in so3.lie.rep]
    rep[0][1][2] += Fraction(1, 1000)
    lie = LieAlgebraData.from_sparse(3, SO3_ENTRIES, rep, "orthogonal")
    assert check_lie_axioms(lie).rep_ok is False


def test_from_sparse_validation():
    with pytest.raises(LieAlgebraError, match="out of range"):
        LieAlgebraData.from_sparse(2, [(3, 1, 2, 1)])
    with pytest.raises(LieAlgebraError, match=r"\(k, i, j, value\)"):
        LieAlgebraData.from_sparse(2, [(1, 1, 2)])
    with pytest.raises(LieAlgebraError, match="unknown group_tag"):
        LieAlgebraData.from_sparse(1, [], [[[0]]], "projective")


def test_expm_matches_rotation():
    t = 2.5
    rot = expm(np.array([[0.0, -t], [t, 0.0]]))
    expected = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert np.max(np.abs(rot - expected)) < 1e-12
    assert exponential_residual(np.array([[0.0, -t], [t, 0.0]])) < 1e-13
    assert expm(np.zeros((0, 0))).shape == (0, 0)


def test_sampling_is_deterministic(so3):
    a = sample_group(so3.lie, 7, 5)
    b = sample_group(so3.lie, 7, 5)
    assert all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a, b))
    c = sample_group(so3.lie, 8, 5)
    assert not np.array_equal(a[0].matrix, c[0].matrix)


def test_samples_are_orthogonal(so3):
    for g in sample_group(so3.lie, 0, 20):
        assert np.max(np.abs(g.matrix.T @ g.matrix - np.identity(6))) < 1e-10
        assert np.max(np.abs(g.matrix @ g.inverse - np.identity(6))) < 1e-10


def test_adjoint_series_matches_conjugation(so3):
    for g in sample_group(so3.lie, 3, 20):
        by_series = adjoint_by_series(so3.lie, g.algebra_vector, g.scale)
        assert np.max(np.abs(by_series - adjoint_by_conjugation(so3.lie, g))) < 1e-9


def test_abelian_adjoint_is_identity(t2):
    g = sample_group(t2.lie, 0, 1)[0]
    assert np.array_equal(adjoint_by_conjugation(t2.lie, g), np.identity(2))
    assert np.array_equal(adjoint_by_series(t2.lie, [0.3, 0.4]), np.identity(2))


def test_sampling_needs_a_tag():
    lie = LieAlgebraData.from_sparse(1, [], [[[0, 1], [-1, 0]]])
    with pytest.raises(LieAlgebraError, match="group_tag"):
        sample_group(lie, 0, 1)


@pytest.mark.parametrize("convention", ["minus_transpose", "plus_transpose"])
def test_coadjoint_bracket_identity(so3, convention):
    # minus_transpose is a representation, plus_transpose an anti-representation
    sign = -COADJOINT_CONVENTIONS[convention]
    affine = LieAlgebraData.from_sparse(2, [(2, 1, 2, 1), (2, 2, 1, -1)])
    r = random.Random(7)
    for lie in (so3.lie, affine):
        for _ in range(10):
            x = [Fraction(r.randint(-3, 3), r.randint(1, 3)) for _ in range(lie.dim)]
            y = [Fraction(r.randint(-3, 3), r.randint(1, 3)) for _ in range(lie.dim)]
            cx, cy = coad_operator(lie, x, convention), coad_operator(lie, y, convention)
            commutator = mat_sub(mat_mul(cx, cy), mat_mul(cy, cx))
            assert coad_operator(lie, lie.bracket(x, y), convention) == mat_scale(commutator, sign)


def test_adjoint_shortcut_follows_the_structure_constants(so3):
    mislabeled = dataclasses.replace(so3.lie, group_tag="abelian")
    x = (0.3, -0.2, 0.5)
    expected = adjoint_by_series(so3.lie, x)
    assert np.max(np.abs(expected - np.identity(3))) > 0.1
    assert np.max(np.abs(adjoint_by_series(mislabeled, x) - expected)) < 1e-12
    g = exponentiate(mislabeled, x)
    assert np.max(np.abs(adjoint_by_conjugation(mislabeled, g) - expected)) < 1e-9
