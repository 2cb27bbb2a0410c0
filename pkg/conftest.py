# conftest.py
import numpy as np
import pytest

from exactpoly import Polynomial
from gradedcore import SuperContext
from spaceconfig import builtin_names, load_space

CORPUS = ("s1_r2", "s1_r2_shifted", "t2_c2", "so3_cotangent_r3", "trivial_group")
THEOREM_CORPUS = ("s1_r2", "s1_r2_shifted", "t2_c2", "so3_cotangent_r3")

_cache = {}


def corpus_space(name: str):
    if name not in _cache:
        _cache[name] = load_space(name)[0]
    return _cache[name]


@pytest.fixture
def s1():
    return corpus_space("s1_r2")


@pytest.fixture
def s1_shifted():
    return corpus_space("s1_r2_shifted")


@pytest.fixture
def so3():
    return corpus_space("so3_cotangent_r3")


@pytest.fixture
def t2():
    return corpus_space("t2_c2")


@pytest.fixture
def trivial():
    return corpus_space("trivial_group")


@pytest.fixture(params=CORPUS)
def any_space(request):
    return corpus_space(request.param)


@pytest.fixture(params=THEOREM_CORPUS)
def theorem_space(request):
    return corpus_space(request.param)


@pytest.fixture
def plane_ctx():
    """C(Z) for mu = (x^2 + y^2)/2 on R^2."""
    variables = ("x", "y")
    return SuperContext(variables, 1, (Polynomial.parse("(x^2 + y^2)/2", variables),))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=[2024, 1]))


@pytest.fixture
def corpus_names():
    return builtin_names()
