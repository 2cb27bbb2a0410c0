# reduction_test.py
from fractions import Fraction

import pytest

import reduction
from dgmanifold import DerivedForm
from exactpoly import Polynomial
from gradedcore import BlockMap
from liealg import LieAlgebraData
from reduction import (
    HamiltonianSpace,
    LabeledPoint,
    PointError,
    alpha_maps,
    analyze_point,
    anchor,
    build_total_complexes,
    check_anchor,
    check_closure,
    check_duality,
    check_equivariance_finite,
    check_exactness,
    check_infinitesimal_equivariance,
    check_multiplicativity,
    check_nerve,
    check_points,
    check_reduced_pullback,
    check_total_complexes,
    reduced_form,
    select_coadjoint_convention,
    theorem_identities,
    validate_hamiltonian,
    verify_theorem,
)
from report import VerificationReport

SO3_ENTRIES = [(3, 1, 2, 1), (3, 2, 1, -1), (1, 2, 3, 1), (1, 3, 2, -1), (2, 3, 1, 1), (2, 1, 3, -1)]


def _full_suite(H, samples=40, seed=0) -> VerificationReport:
    report = VerificationReport()
    for part in (
        validate_hamiltonian(H),
        check_exactness(H, seed, count=30),
        check_anchor(H),
        check_total_complexes(H),
        check_duality(H),
        verify_theorem(H),
        check_closure(H, samples, seed, 1e-8),
        check_multiplicativity(H, samples, seed, 1e-9),
        check_reduced_pullback(H),
        check_equivariance_finite(H, samples, seed, 1e-9),
        check_nerve(H, samples, seed, 1e-9),
        check_points(H, seed),
    ):
        report.extend(part)
    return report


def _failures(report: VerificationReport) -> list[tuple[str, str | None]]:
    return [(r.check_id, r.witness) for r in report.records if r.status == "fail"]


def _s1_with(rep, group_tag="orthogonal") -> HamiltonianSpace:
    variables = ("x", "y")
    lie = LieAlgebraData.from_sparse(1, [], rep, group_tag, rep_dim=2)
    mu = [Polynomial.parse("(x^2 + y^2)/2", variables)]
    return HamiltonianSpace.build("s1_variant", variables, [[0, -1], [1, 0]], lie, mu)


def test_every_check_passes_on_the_corpus(any_space):
    report = _full_suite(any_space)
    assert _failures(report) == []
    assert len(report.records) > 40


def test_numeric_rows_carry_residuals(so3):
    report = check_closure(so3, 100, 0, 1e-8)
    sampled = report.by_id("closure.sampled")
    assert sampled.status == "pass"
    assert sampled.kind == "numeric"
    assert sampled.residual < 1e-8
    assert sampled.tolerance == 1e-8


def test_numeric_checks_are_deterministic(so3):
    first = check_multiplicativity(so3, 30, 5, 1e-9)
    second = check_multiplicativity(so3, 30, 5, 1e-9)
    assert [r.residual for r in first.records] == [r.residual for r in second.records]


def test_so3_anchor_has_a_coadjoint_part(so3):
    rho = anchor(so3)
    # eta(E_1) = -E_3 iota_sigma2 + E_2 iota_sigma3
    assert rho.entry(so3.n + 1, 0) == -so3.ctx.generator(2)
    assert rho.entry(so3.n + 2, 0) == so3.ctx.generator(1)
    totals = build_total_complexes(so3)
    assert not totals.tangent.structure.block("g*[-1]", "g[1]").is_zero()
    assert theorem_identities(totals, reduced_form(so3, totals)) == {
        "identity_1": None,
        "identity_2": None,
        "identity_3": None,
    }


def test_total_complex_layout(s1):
    totals = build_total_complexes(s1)
    assert totals.tangent.module.names == ["E1[1]", "d/dx", "d/dy", "iota_sigma1"]
    assert totals.tangent.module.degrees == [-1, 0, 0, 1]
    assert [b[0] for b in totals.cotangent.module.blocks] == ["g[1]", "T*_M", "g*[-1]"]
    assert totals.cotangent.module.degrees == [-1, 0, 0, 1]
    # rho(E_1) = y d/dx - x d/dy
    assert totals.rho.entry(0, 0) == s1.ctx.variable("y")
    assert totals.rho.entry(1, 0) == -s1.ctx.variable("x")


def test_convention_selection(so3, s1):
    assert select_coadjoint_convention(so3) == "minus_transpose"
    assert select_coadjoint_convention(s1) == "minus_transpose"


def test_wrong_coadjoint_convention_breaks_the_anchor(so3):
    report = check_anchor(so3, "plus_transpose")
    row = report.by_id("anchor.chain_map")
    assert row.status == "fail"
    assert row.witness
    assert report.by_id("anchor.alpha_star_chain_map").status == "pass"


def test_perturbed_action_is_caught():
    H = _s1_with([[["1/1000", 1], [-1, 0]]])
    report = validate_hamiltonian(H)
    assert report.by_id("hamiltonian.omega_invariant").status == "fail"
    hamilton = report.by_id("hamiltonian.hamilton_condition")
    assert hamilton.status == "fail"
    assert "component y" in hamilton.witness
    assert hamilton.anchor == "iota_{E_i#} omega = d mu^i"
    assert report.by_id("hamiltonian.rep_homomorphism").status == "pass"


def test_perturbed_structure_constant_is_caught(so3):
    lie = LieAlgebraData.from_sparse(3, SO3_ENTRIES + [(3, 1, 2, 1)], so3.lie.rep, "orthogonal")
    H = HamiltonianSpace.build("so3_faulty", so3.variables, so3.omega_matrix, lie, so3.mu)
    report = validate_hamiltonian(H)
    assert report.by_id("hamiltonian.lie_antisymmetry").status == "fail"
    assert report.by_id("hamiltonian.rep_homomorphism").status == "fail"
    assert not report.ok


@pytest.mark.parametrize("factor", [3, "1/2", -2])
def test_scaling_omega_and_mu_preserves_every_identity(theorem_space, factor):
    H = theorem_space.scaled(factor)
    report = VerificationReport()
    report.extend(validate_hamiltonian(H))
    report.extend(verify_theorem(H))
    assert _failures(report) == []


def test_equivariance_rows(t2):
    report = check_infinitesimal_equivariance(t2)
    assert [r.check_id for r in report.records] == [
        "theorem.equivariance_tangent",
        "theorem.equivariance_cotangent",
        "theorem.equivariance_reduced_form",
        "theorem.equivariance_delta",
    ]
    assert report.ok


def test_numeric_layer_needs_a_group_tag():
    H = _s1_with([[[0, 1], [-1, 0]]], group_tag=None)
    closure = check_closure(H, 10, 0, 1e-8)
    assert closure.by_id("closure.omega_closed").status == "pass"
    assert closure.by_id("closure.sampled").status == "skipped"
    nerve = check_nerve(H, 10, 0, 1e-8)
    assert {r.status for r in nerve.records} == {"skipped"}
    assert "group_tag" in nerve.records[0].witness


def test_analyze_point(s1, s1_shifted, so3):
    origin = analyze_point(s1, [0, 0])
    assert origin.classification == "singular"
    assert origin.tangent_complex == (2, 1)
    assert origin.koszul_cohomology == {-1: 1, 0: 1}

    unit = analyze_point(s1_shifted, [1, 0])
    assert unit.classification == "regular"
    assert unit.tangent_complex == (1, 0)
    assert unit.jacobian_rank == 1
    assert "regular" in unit.describe()

    parallel = analyze_point(so3, [1, 0, 0, 1, 0, 0])
    assert parallel.jacobian_rank == 2
    assert parallel.classification == "singular"

    with pytest.raises(PointError):
        analyze_point(s1, [1, 0])


def test_point_rows(s1, s1_shifted):
    wrong = check_points(s1_shifted, 0, [LabeledPoint("unit_x", (Fraction(1), Fraction(0)), "singular")])
    assert wrong.by_id("points.off_zero_set").status == "pass"
    assert "expected singular" in wrong.by_id("points.unit_x").witness

    off = check_points(s1, 0, [LabeledPoint("off", (Fraction(1), Fraction(0)))])
    row = off.by_id("points.off")
    assert row.status == "fail"
    assert row.witness.startswith("PointError")


def test_trivial_group_skips_off_zero_set_sampling(trivial):
    report = check_points(trivial, 0)
    assert report.by_id("points.off_zero_set").status == "skipped"
    assert report.by_id("points.origin").status == "pass"


def _block_diagonal(H: HamiltonianSpace, totals) -> BlockMap:
    n, d = H.n, H.d
    entries = {(i, i): 1 for i in range(d)}
    entries.update({(d + b, d + a): H.omega[b][a] for b in range(n) for a in range(n) if H.omega[b][a]})
    entries.update({(d + n + j, d + n + j): 1 for j in range(d)})
    return BlockMap.from_entries(totals.tangent.module, totals.cotangent.module, 0, entries)


def test_reduced_form_is_block_diagonal(theorem_space):
    totals = build_total_complexes(theorem_space)
    assert reduced_form(theorem_space, totals) == _block_diagonal(theorem_space, totals)


def test_a_wrong_alpha_breaks_the_theorem(s1, monkeypatch):
    alpha, alpha_star = alpha_maps(s1)
    monkeypatch.setattr(reduction, "alpha_maps", lambda H: (alpha.scale(2), alpha_star))
    report = verify_theorem(s1)
    assert report.by_id("theorem.identity_2").status == "fail"
    assert report.by_id("theorem.chain_map").status == "fail"
    assert report.by_id("theorem.identity_1").status == "pass"


def test_reduced_pullback_goes_through_the_exterior_derivative(s1, monkeypatch):
    report = check_reduced_pullback(s1)
    assert [r.check_id for r in report.records] == ["reduced_pullback.theta", "reduced_pullback.d_theta"]
    assert report.ok
    monkeypatch.setattr(reduction, "derham_d", lambda space, form: DerivedForm.dx(space.ctx, 0))
    row = check_reduced_pullback(s1).by_id("reduced_pullback.d_theta")
    assert row.status == "fail"
    assert "Maurer-Cartan" in row.witness


def test_numeric_residuals_react_to_a_small_perturbation():
    tol = 1e-8
    exact = _s1_with([[[0, 1], [-1, 0]]])
    perturbed = _s1_with([[["1/1000", 1], [-1, 0]]])
    assert check_closure(exact, 40, 0, tol).by_id("closure.sampled").residual < tol
    closure = check_closure(perturbed, 40, 0, tol).by_id("closure.sampled")
    assert closure.status == "fail"
    assert closure.residual > 10 * tol
    transport = check_equivariance_finite(perturbed, 40, 0, tol).by_id("equivariance.action_transport")
    assert transport.status == "fail"
    assert transport.residual > 10 * tol
