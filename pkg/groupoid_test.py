# groupoid_test.py
import numpy as np
import pytest

from groupoid import (
    Simplex,
    cochain_differential,
    face,
    random_simplices,
    simplex_distance,
    simplicial_identity_residual,
)


def _rotation(t: float) -> np.ndarray:
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


@pytest.fixture
def two_simplex():
    return Simplex((_rotation(0.3), _rotation(1.1)), np.array([1.0, -0.5]))


def test_faces_of_an_arrow():
    g, x = _rotation(0.7), np.array([0.2, 0.4])
    arrow = Simplex((g,), x)
    # d_0 is the source, d_1 the target
    assert np.allclose(face(0, arrow).point, x)
    assert np.allclose(face(1, arrow).point, g @ x)
    assert face(0, arrow).level == 0


def test_inner_face_multiplies(two_simplex):
    inner = face(1, two_simplex)
    assert inner.level == 1
    assert np.allclose(inner.arrows[0], _rotation(1.4))
    assert np.allclose(inner.point, two_simplex.point)


def test_simplicial_identities(rng):
    arrows = [_rotation(t) for t in rng.uniform(-3.0, 3.0, size=12)]
    points = list(rng.uniform(-1.0, 1.0, size=(6, 2)))
    for level in (2, 3):
        for s in random_simplices(arrows, points, level):
            assert s.level == level
            assert simplicial_identity_residual(s) < 1e-12


def test_cochain_differential_squares_to_zero(two_simplex):
    f = lambda s: float(s.point[0] ** 2 + 3.0 * s.point[1])
    ddf = cochain_differential(cochain_differential(f, 0), 1)
    assert abs(ddf(two_simplex)) < 1e-12


def test_cochain_differential_checks_the_level(two_simplex):
    df = cochain_differential(lambda s: 0.0, 0)
    with pytest.raises(ValueError, match="expected a 1-simplex"):
        df(two_simplex)


def test_face_index_errors(two_simplex):
    with pytest.raises(ValueError, match="out of range"):
        face(3, two_simplex)
    with pytest.raises(ValueError, match="no faces"):
        face(0, Simplex((), np.zeros(2)))


def test_distance_between_levels(two_simplex):
    assert simplex_distance(two_simplex, face(0, two_simplex)) == float("inf")
    assert simplex_distance(two_simplex, two_simplex) == 0.0
