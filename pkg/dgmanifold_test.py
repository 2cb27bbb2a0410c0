# dgmanifold_test.py
import random
from fractions import Fraction

import pytest
import sympy

from dgmanifold import (
    SIGN_TABLE,
    DerivedForm,
    FormError,
    PointError,
    VectorFieldOnZ,
    contract,
    derham_d,
    form_inner_delta,
    homological_vector_field,
    koszul_complex,
    lie_derivative,
    pairing,
    pairing_residual,
    point_tangent_complex,
    random_form,
    random_superfunction,
    random_vector_field,
    require_zero_set,
)
from exactpoly import Polynomial
from gradedcore import pointwise_cohomology


def test_sign_table():
    assert {k: v["parity"] for k, v in SIGN_TABLE.items()} == {
        "x": "even",
        "E": "odd",
        "dx": "odd",
        "dE": "even",
    }
    assert SIGN_TABLE["dE"]["form_degree"] == 1
    assert SIGN_TABLE["dE"]["derived_degree"] == -1


def test_generator_commutation(so3):
    ctx = so3.ctx
    e, dx, de = DerivedForm.E(ctx, 0), DerivedForm.dx(ctx, 0), DerivedForm.dE(ctx, 1)
    assert e * dx == -(dx * e)
    assert (dx * dx).is_zero()
    assert de * dx == dx * de
    assert de * de != DerivedForm.zero(ctx)


def test_d_on_generators(s1):
    ctx = s1.ctx
    x = DerivedForm.from_polynomial(ctx, Polynomial.variable("x", s1.variables))
    assert derham_d(s1.space, x) == DerivedForm.dx(ctx, 0)
    assert derham_d(s1.space, DerivedForm.E(ctx, 0)) == DerivedForm.dE(ctx, 0)
    assert derham_d(s1.space, DerivedForm.dE(ctx, 0)).is_zero()


def test_inner_differential_on_generators(s1):
    ctx = s1.ctx
    assert form_inner_delta(s1.space, DerivedForm.E(ctx, 0)) == DerivedForm.from_polynomial(ctx, s1.mu[0])
    # dE -> d mu = x dx + y dy
    expected = DerivedForm.monomial(ctx, odd=(0,), coef=s1.mu[0].partial(0)) + DerivedForm.monomial(
        ctx, odd=(1,), coef=s1.mu[0].partial(1)
    )
    assert form_inner_delta(s1.space, DerivedForm.dE(ctx, 0)) == expected


@pytest.mark.parametrize("name", ["s1", "so3"])
def test_form_identities_on_random_forms(name, request, rng):
    H = request.getfixturevalue(name)
    space = H.space
    for _ in range(40):
        w = random_form(H.ctx, rng)
        assert derham_d(space, derham_d(space, w)).is_zero()
        assert form_inner_delta(space, form_inner_delta(space, w)).is_zero()
        assert derham_d(space, form_inner_delta(space, w)) == form_inner_delta(space, derham_d(space, w))


def test_homological_field_is_the_koszul_differential(so3, rng):
    q = homological_vector_field(so3.space)
    for _ in range(30):
        f = random_superfunction(so3.ctx, rng)
        assert q.apply(f) == so3.ctx.delta(f)


def test_lie_derivative_on_functions(so3, rng):
    for _ in range(15):
        field = random_vector_field(so3.ctx, rng)
        f = random_superfunction(so3.ctx, rng)
        lhs = lie_derivative(so3.space, field, DerivedForm.from_superfunction(f))
        assert lhs == DerivedForm.from_superfunction(field.apply(f))


def test_pairing_of_basis_elements(s1):
    ctx = s1.ctx
    assert pairing(VectorFieldOnZ.basis_partial(ctx, 1), DerivedForm.dx(ctx, 1)) == ctx.one()
    assert pairing(VectorFieldOnZ.basis_contraction(ctx, 0), DerivedForm.dE(ctx, 0)) == ctx.one()
    assert pairing(VectorFieldOnZ.basis_partial(ctx, 0), DerivedForm.dE(ctx, 0)).is_zero()


def test_form_errors(s1):
    ctx = s1.ctx
    with pytest.raises(FormError, match="not a 0-form"):
        DerivedForm.dx(ctx, 0).to_superfunction()
    with pytest.raises(FormError, match="not a 1-form"):
        (DerivedForm.dx(ctx, 0) * DerivedForm.dx(ctx, 1)).one_form_coefficients()
    with pytest.raises(FormError, match="0-form"):
        contract(VectorFieldOnZ.basis_partial(ctx, 0), DerivedForm.E(ctx, 0))
    with pytest.raises(FormError, match="out of range"):
        DerivedForm.monomial(ctx, odd=(9,))
    with pytest.raises(FormError, match="different spaces"):
        DerivedForm.dx(ctx, 0) + DerivedForm.dx(ctx.trivial(("u",), 0), 0)


def test_koszul_complex_is_rank_one(so3):
    dg = koszul_complex(so3.space)
    assert dg.module.names == ["1"]
    assert dg.structure.is_zero()


def test_tangent_and_cotangent_entries(s1):
    ctx = s1.ctx
    tangent = s1.tangent
    assert tangent.module.names == ["d/dx", "d/dy", "iota_sigma1"]
    assert tangent.structure.entry(2, 0) == -ctx.variable("x")
    assert tangent.structure.entry(2, 1) == -ctx.variable("y")
    cotangent = s1.cotangent
    assert cotangent.module.names == ["dE1", "dx", "dy"]
    assert cotangent.module.degrees == [-1, 0, 0]
    assert cotangent.structure.entry(1, 0) == ctx.variable("x")
    assert cotangent.structure.entry(2, 0) == ctx.variable("y")


@pytest.mark.parametrize("name", ["s1", "so3", "t2"])
def test_pairing_is_compatible_with_differentials(name, request):
    assert pairing_residual(request.getfixturevalue(name).space) is None


def test_point_tangent_complex(s1, so3):
    assert point_tangent_complex(s1.space, [0, 0]).dims == (2, 1)
    parallel = point_tangent_complex(so3.space, [1, 0, 0, 1, 0, 0])
    assert parallel.rank == 2
    assert parallel.dims == (4, 1)


def test_points_off_the_zero_set_are_refused(s1):
    with pytest.raises(PointError) as excinfo:
        require_zero_set(s1.space, [1, 0])
    assert excinfo.value.values == [Fraction(1, 2)]
    with pytest.raises(PointError, match="coordinates"):
        require_zero_set(s1.space, [0])


def test_jacobian_rank_agrees_with_sympy(so3):
    symbols = sympy.symbols(so3.variables)
    jac = sympy.Matrix([p.to_sympy() for p in so3.mu]).jacobian(symbols)
    r = random.Random(9)
    for _ in range(10):
        q = [Fraction(r.randint(-3, 3), r.randint(1, 2)) for _ in range(3)]
        t = Fraction(r.randint(-2, 2), r.randint(1, 3))
        point = q + [t * v for v in q]
        expected = jac.subs(dict(zip(symbols, [sympy.Rational(v.numerator, v.denominator) for v in point]))).rank()
        assert point_tangent_complex(so3.space, point).rank == expected


def test_koszul_cohomology_matches_a_rank_oracle(s1, so3):
    dg = koszul_complex(s1.space)
    mu = s1.mu[0].to_sympy()
    symbols = sympy.symbols("x y")
    for point in ([0, 0], [1, 0], [Fraction(3, 5), Fraction(4, 5)], [0, Fraction(1, 2)]):
        # the fiber complex is R E_1 -> R 1 with E_1 -> mu(m)
        subs = {s: sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for s, v in zip(symbols, point)}
        rank = sympy.Matrix([[mu.subs(subs)]]).rank()
        assert pointwise_cohomology(dg, point) == {-1: 1 - rank, 0: 1 - rank}
    # mu vanishes at the origin, so every exterior power survives
    assert pointwise_cohomology(koszul_complex(so3.space), [0] * 6) == {-3: 1, -2: 3, -1: 3, 0: 1}
