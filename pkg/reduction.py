# reduction.py
"""
Reduction of a linear Hamiltonian G-space (M = R^n, constant omega, linear
action, quadratic moment map): the anchor, the total complexes of the
tangent and cotangent complexes of Z/G, the reduced form and its checks.

Every check returns report rows; mathematical failures never raise.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from typing import Callable, Sequence

import numpy as np

from dgmanifold import (
    DerivedForm,
    PointError,
    QuasiSmoothSpace,
    cotangent_module,
    derham_d,
    form_inner_delta,
    homological_vector_field,
    koszul_complex,
    lie_derivative,
    pairing_residual,
    point_tangent_complex,
    random_form,
    random_superfunction,
    random_vector_field,
    require_zero_set,
    tangent_module,
)
from exactlinalg import Matrix, as_matrix, bareiss_rank, to_float
from exactpoly import Polynomial, as_rational, poly_sum
from gradedcore import (
    BlockMap,
    DgModule,
    FreeGradedModule,
    SuperFunction,
    cocone,
    compose,
    cone,
    derivation,
    dual_module,
    invert_block_triangular,
    koszul_transpose,
    pointwise_cohomology,
    shift_dg,
    square_residual,
    total_complex,
    verify_chain_map,
)
from groupoid import Simplex, cochain_differential, random_simplices, simplicial_identity_residual
from liealg import (
    COADJOINT_CONVENTIONS,
    DEFAULT_COADJOINT,
    LieAlgebraData,
    LieAlgebraError,
    NumericGroupElement,
    ad_matrix_float,
    ad_operator,
    adjoint_by_conjugation,
    adjoint_by_series,
    check_lie_axioms,
    coad_operator,
    coadjoint_matrix,
    rep_matrix_float,
    sample_group,
)
from report import CheckRecord, Kind, VerificationReport
from settings import settings

logger = logging.getLogger(__name__)

IDENTITY_CATALOGUE: dict[str, str] = {
    "hamiltonian.lie_antisymmetry": "c^k_ij = -c^k_ji",
    "hamiltonian.lie_jacobi": "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0",
    "hamiltonian.rep_homomorphism": "[A_i, A_j] = sum_k c^k_ij A_k",
    "hamiltonian.omega_nondegenerate": "omega^T = -omega, rank omega = n, n even",
    "hamiltonian.mu_quadratic": "deg mu^j <= 2",
    "hamiltonian.omega_invariant": "A_i^T omega + omega A_i = 0",
    "hamiltonian.hamilton_condition": "iota_{E_i#} omega = d mu^i",
    "hamiltonian.pairing": "omega(E_i#, E_j#) = sum_k c^k_ij mu^k",
    "hamiltonian.moment_equivariance": "E_i#(mu^j) = (ad*_{E_i} mu)_j",
    "exactness.koszul_square": "delta^2 = 0 on C(Z)",
    "exactness.derham_square": "d^2 = 0 on forms on Z",
    "exactness.inner_square": "delta^2 = 0 on forms on Z",
    "exactness.d_delta_commute": "d delta = delta d on forms on Z",
    "exactness.inner_is_lie_derivative": "delta = (-1)^p L_Q on p-forms, Q = sum_j mu^j iota_{sigma_j}",
    "exactness.cartan": "L_X f = iota_X d f = X(f)",
    "anchor.chain_map": "delta_T rho = rho delta_g for rho = rho_0 + eta, eta(E_i) = ad*_{E_i}",
    "anchor.alpha_chain_map": "alpha(iota_{sigma_i}) = sigma_i is a chain map on g*_Z[-1]",
    "anchor.alpha_star_chain_map": "alpha*(dE_i) = E_i, alpha*(dx_a) = 0 is a chain map",
    "total.degrees": "Tot(T): g[1] in degree -1, T_M in 0, g*[-1] in +1",
    "total.tangent_square_zero": "D_Tot(T)^2 = 0",
    "total.cotangent_square_zero": "D_Tot(T*)^2 = 0",
    "total.tangent_cocone": "T_Z = cocone(dmu: T_M -> g*_Z)",
    "total.cotangent_cone": "T*_Z = cone(dmu*: g_Z -> T*_M)",
    "total.pairing_chain": "<delta v, a> + (-1)^{deg v} <v, delta a> = delta <v, a>",
    "duality.tot": "Tot(T*) = Tot(T)^v under dE_j <-> iota_{sigma_j}^v, dx_a <-> (d/dx_a)^v, sigma_j[-1] <-> E_j[1]^v",
    "theorem.identity_1": "(iota*_Z omega)^b rho_0 = dmu* alpha*",
    "theorem.identity_2": "alpha dmu = rho_0* (iota*_Z omega)^b",
    "theorem.identity_3": "alpha eta = eta* alpha*",
    "theorem.chain_map": "omega_red^b D_Tot(T) = D_Tot(T*) omega_red^b",
    "theorem.identities_match_chain_map": "the three block identities hold iff omega_red^b is a chain map",
    "theorem.inverse_left": "(omega_red^b)^-1 omega_red^b = id",
    "theorem.inverse_right": "omega_red^b (omega_red^b)^-1 = id",
    "theorem.equivariance_tangent": "[E_k, D_Tot(T)] = 0",
    "theorem.equivariance_cotangent": "[E_k, D_Tot(T*)] = 0",
    "theorem.equivariance_reduced_form": "E_k omega_red^b = omega_red^b E_k",
    "theorem.equivariance_delta": "E_k delta = delta E_k on C(Z)",
    "closure.omega_closed": "d omega = 0",
    "closure.hamilton_reduction": "d mu^X(v) = omega(X#, v)",
    "closure.pairing_reduction": "omega(X_1#, X_2#) = mu^{[X_1, X_2]}",
    "closure.sampled": "(s* - t*) iota*_Z omega = iota_mu d theta",
    "multiplicativity.jacobi": "d/dt of the Ad cocycle at the identity: Jacobi identity",
    "multiplicativity.ad_cocycle": "Ad_{(g_1 g_2)^-1} = Ad_{g_2^-1} Ad_{g_1^-1}",
    "multiplicativity.theta_identity": "(m* theta)_{(g_1, g_2)} = Ad_{g_2^-1} pr_1* theta + pr_2* theta",
    "reduced_pullback.theta": "u* theta = 0",
    "reduced_pullback.d_theta": "u* d theta = 0, hence pi* omega_red = omega restricted to Z",
    "equivariance.action_transport": "(Ad_{g^-1} X)# = g_* X#",
    "equivariance.coadjoint": "ad*_{Ad_{g^-1} X} = Ad*_{g^-1} ad*_X Ad*_g",
    "equivariance.omega_invariance": "g^T omega g = omega",
    "nerve.simplicial_identities": "d_i d_j = d_{j-1} d_i for i < j",
    "nerve.cochain_square": "dd = 0 on groupoid cochains",
    "points.off_zero_set": "Koszul cohomology at m vanishes when mu(m) != 0",
    "points.analysis": "regular iff rank D_m mu = d; T_m M -> g* has cohomology (ker, coker)",
}


def anchor_for(check_id: str) -> str:
    if check_id in IDENTITY_CATALOGUE:
        return IDENTITY_CATALOGUE[check_id]
    if check_id.startswith("points."):
        return IDENTITY_CATALOGUE["points.analysis"]
    raise KeyError(f"no catalogue entry for check {check_id!r}")


# -----------------------------
# The input datum
# -----------------------------
@dataclass(frozen=True)
class LabeledPoint:
    label: str
    coords: tuple[Fraction, ...]
    expect: str | None = None


@dataclass(frozen=True, eq=False)
class HamiltonianSpace:
    name: str
    space: QuasiSmoothSpace
    omega: tuple[tuple[Fraction, ...], ...]
    points: tuple[LabeledPoint, ...] = ()

    def __post_init__(self):
        n = self.space.n
        if len(self.omega) != n or any(len(row) != n for row in self.omega):
            raise LieAlgebraError(f"omega must be {n}x{n}")
        lie = self.space.lie
        if lie.dim and lie.rep is None:
            raise LieAlgebraError("the action is given by rep matrices; this Lie algebra has none")
        if lie.dim and lie.rep_dim != n:
            raise LieAlgebraError(f"rep matrices are {lie.rep_dim}x{lie.rep_dim} but M has dimension {n}")

    @classmethod
    def build(
        cls,
        name: str,
        variables: Sequence[str],
        omega: Sequence[Sequence[object]],
        lie: LieAlgebraData,
        mu: Sequence[Polynomial],
        points: Sequence[LabeledPoint] = (),
    ) -> "HamiltonianSpace":
        space = QuasiSmoothSpace(lie, tuple(mu), tuple(variables))
        return cls(name, space, tuple(tuple(row) for row in as_matrix(omega)), tuple(points))

    @property
    def lie(self) -> LieAlgebraData:
        return self.space.lie

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def d(self) -> int:
        return self.space.d

    @property
    def ctx(self):
        return self.space.ctx

    @property
    def variables(self) -> tuple[str, ...]:
        return self.space.variables

    @property
    def mu(self) -> tuple[Polynomial, ...]:
        return self.space.mu

    @property
    def omega_matrix(self) -> Matrix:
        return [list(row) for row in self.omega]

    def action(self, i: int) -> Matrix:
        return [list(row) for row in self.lie.rep[i]]

    @cached_property
    def action_fields(self) -> tuple[tuple[Polynomial, ...], ...]:
        """(E_i#)_a = (A_i x)_a."""
        xs = [Polynomial.variable(b, self.variables) for b in range(self.n)]
        out = []
        for i in range(self.d):
            a_i = self.lie.rep[i]
            out.append(tuple(poly_sum((xs[b].scale(a_i[a][b]) for b in range(self.n) if a_i[a][b]), self.variables) for a in range(self.n)))
        return tuple(out)

    @cached_property
    def tangent(self) -> DgModule:
        return tangent_module(self.space)

    @cached_property
    def cotangent(self) -> DgModule:
        return cotangent_module(self.space)

    def scaled(self, factor: object) -> "HamiltonianSpace":
        """omega -> f omega and mu -> f mu."""

        f = as_rational(factor)
        space = QuasiSmoothSpace(self.lie, tuple(p.scale(f) for p in self.mu), self.variables)
        return HamiltonianSpace(self.name, space, tuple(tuple(v * f for v in row) for row in self.omega), self.points)


# -----------------------------
# Row helpers
# -----------------------------
def _exact(check_id: str, witness: str | None, detail: str | None = None) -> CheckRecord:
    return CheckRecord(
        check_id=check_id,
        status="pass" if witness is None else "fail",
        kind="exact",
        witness=witness,
        anchor=anchor_for(check_id),
        detail=detail,
    )


def _numeric(check_id: str, residual: float, tol: float) -> CheckRecord:
    ok = bool(np.isfinite(residual)) and residual < tol
    return CheckRecord(
        check_id=check_id,
        status="pass" if ok else "fail",
        kind="numeric",
        residual=float(residual),
        tolerance=tol,
        witness=None if ok else f"max residual {residual:.3e} >= tolerance {tol:.1e}",
        anchor=anchor_for(check_id),
    )


def _skipped(check_id: str, kind: Kind, reason: str) -> CheckRecord:
    return CheckRecord(check_id=check_id, status="skipped", kind=kind, witness=reason, anchor=anchor_for(check_id))


def _run(report: VerificationReport, check_id: str, kind: Kind, fn: Callable[[], CheckRecord]) -> CheckRecord:
    try:
        record = fn()
    except Exception as exc:
        logger.exception(f"Check {check_id} raised")
        record = CheckRecord(
            check_id=check_id,
            status="fail",
            kind=kind,
            witness=f"{type(exc).__name__}: {exc}",
            anchor=anchor_for(check_id),
        )
    return report.add(record)


def _numeric_skip_reason(H: HamiltonianSpace) -> str | None:
    if H.lie.rep is None:
        return "no representation: numeric layer skipped"
    if H.lie.group_tag is None:
        return "no group_tag: numeric layer skipped"
    return None


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


# -----------------------------
# Hamiltonian validation
# -----------------------------
def _omega_witness(H: HamiltonianSpace) -> str | None:
    om = H.omega
    for a in range(H.n):
        for b in range(a, H.n):
            if om[a][b] + om[b][a]:
                return f"omega[{a + 1}][{b + 1}] + omega[{b + 1}][{a + 1}] = {om[a][b] + om[b][a]}"
    if H.n % 2:
        return f"n = {H.n} is odd"
    rank = bareiss_rank(H.omega_matrix)
    if rank != H.n:
        return f"omega has rank {rank} < {H.n}"
    return None


def _invariance_witness(H: HamiltonianSpace) -> str | None:
    om = H.omega
    for i in range(H.d):
        a_i = H.lie.rep[i]
        for r in range(H.n):
            for c in range(H.n):
                value = sum((a_i[k][r] * om[k][c] + om[r][k] * a_i[k][c] for k in range(H.n)), Fraction(0))
                if value:
                    return f"i={i + 1}, entry ({r + 1}, {c + 1}): {value}"
    return None


def _hamilton_witness(H: HamiltonianSpace) -> str | None:
    om = H.omega
    for i, field in enumerate(H.action_fields):
        for a in range(H.n):
            lhs = poly_sum((field[b].scale(om[a][b]) for b in range(H.n) if om[a][b]), H.variables)
            diff = lhs - H.mu[i].partial(a)
            if diff:
                return f"i={i + 1}, component {H.variables[a]}: {diff}"
    return None


def _pairing_witness(H: HamiltonianSpace) -> str | None:
    om = H.omega
    c = H.lie.structure_constants
    fields = H.action_fields
    for i in range(H.d):
        for j in range(H.d):
            lhs = poly_sum(
                (fields[j][a] * fields[i][b].scale(om[a][b]) for a in range(H.n) for b in range(H.n) if om[a][b]),
                H.variables,
            )
            rhs = poly_sum((H.mu[k].scale(c[k][i][j]) for k in range(H.d) if c[k][i][j]), H.variables)
            if lhs != rhs:
                return f"(i, j) = ({i + 1}, {j + 1}): {lhs - rhs}"
    return None


def _moment_equivariance_witness(H: HamiltonianSpace, convention: str) -> str | None:
    for i, field in enumerate(H.action_fields):
        coad = coad_operator(H.lie, H.lie.basis_vector(i), convention)
        for j in range(H.d):
            lhs = poly_sum((field[a] * H.mu[j].partial(a) for a in range(H.n)), H.variables)
            rhs = poly_sum((H.mu[k].scale(coad[j][k]) for k in range(H.d) if coad[j][k]), H.variables)
            if lhs != rhs:
                return f"(i, j) = ({i + 1}, {j + 1}): {lhs - rhs}"
    return None


def _mu_degree_witness(H: HamiltonianSpace) -> str | None:
    for j, p in enumerate(H.mu):
        if p.total_degree() > 2:
            return f"mu^{j + 1} has degree {p.total_degree()}"
    return None


def select_coadjoint_convention(H: HamiltonianSpace) -> str:
    """First coadjoint sign under which E_i#(mu^j) = (ad*_{E_i} mu)_j holds."""
    for convention in COADJOINT_CONVENTIONS:
        if _moment_equivariance_witness(H, convention) is None:
            if convention != DEFAULT_COADJOINT:
                logger.info(f"Coadjoint convention flipped to {convention} for {H.name}")
            return convention
    logger.warning(f"No coadjoint convention makes mu equivariant for {H.name}; keeping {DEFAULT_COADJOINT}")
    return DEFAULT_COADJOINT


def validate_hamiltonian(H: HamiltonianSpace, convention: str | None = None) -> VerificationReport:
    report = VerificationReport()
    convention = convention or select_coadjoint_convention(H)
    axioms = cache(lambda: check_lie_axioms(H.lie))

    def axiom_row(check_id: str, flag: str, key: str) -> CheckRecord:
        result = axioms()
        ok = getattr(result, flag)
        if ok is None:
            return _skipped(check_id, "exact", "no representation attached")
        witness = None if ok else f"indices {result.witnesses[key][0]}: residual {result.witnesses[key][1]}"
        return _exact(check_id, witness)

    _run(report, "hamiltonian.lie_antisymmetry", "exact", lambda: axiom_row("hamiltonian.lie_antisymmetry", "antisymmetry_ok", "antisymmetry"))
    _run(report, "hamiltonian.lie_jacobi", "exact", lambda: axiom_row("hamiltonian.lie_jacobi", "jacobi_ok", "jacobi"))
    _run(report, "hamiltonian.rep_homomorphism", "exact", lambda: axiom_row("hamiltonian.rep_homomorphism", "rep_ok", "rep"))
    _run(report, "hamiltonian.omega_nondegenerate", "exact", lambda: _exact("hamiltonian.omega_nondegenerate", _omega_witness(H)))
    _run(report, "hamiltonian.mu_quadratic", "exact", lambda: _exact("hamiltonian.mu_quadratic", _mu_degree_witness(H)))
    _run(report, "hamiltonian.omega_invariant", "exact", lambda: _exact("hamiltonian.omega_invariant", _invariance_witness(H)))
    _run(report, "hamiltonian.hamilton_condition", "exact", lambda: _exact("hamiltonian.hamilton_condition", _hamilton_witness(H)))
    _run(report, "hamiltonian.pairing", "exact", lambda: _exact("hamiltonian.pairing", _pairing_witness(H)))
    _run(
        report,
        "hamiltonian.moment_equivariance",
        "exact",
        lambda: _exact(
            "hamiltonian.moment_equivariance",
            _moment_equivariance_witness(H, convention),
            detail=f"coadjoint convention {convention}",
        ),
    )
    return report


# -----------------------------
# Exact identity sweeps on Z
# -----------------------------
def check_exactness(H: HamiltonianSpace, seed: int = 0, count: int | None = None) -> VerificationReport:
    count = settings.EXACT_SAMPLES if count is None else count
    space, ctx = H.space, H.ctx
    report = VerificationReport()

    def koszul_square() -> CheckRecord:
        rng = _rng(seed, 10)
        elements = [ctx.generator(j) for j in range(H.d)] + [ctx.variable(a) for a in range(H.n)]
        elements += [random_superfunction(ctx, rng) for _ in range(count)]
        for f in elements:
            value = ctx.delta(ctx.delta(f))
            if value:
                return _exact("exactness.koszul_square", f"delta^2({f}) = {value}")
        return _exact("exactness.koszul_square", None)

    def forms_sweep(check_id: str, stream: int, residual: Callable[[DerivedForm], DerivedForm]) -> CheckRecord:
        rng = _rng(seed, stream)
        for _ in range(count):
            form = random_form(ctx, rng)
            value = residual(form)
            if value:
                return _exact(check_id, f"at {form}: {value}")
        return _exact(check_id, None)

    def d_delta(form: DerivedForm) -> DerivedForm:
        return derham_d(space, form_inner_delta(space, form)) - form_inner_delta(space, derham_d(space, form))

    q_field = homological_vector_field(space)

    def inner_vs_lie(form: DerivedForm) -> DerivedForm:
        total = form_inner_delta(space, form)
        for p in sorted(form.form_degrees()):
            piece = lie_derivative(space, q_field, form.component(p))
            total = total + piece if p % 2 else total - piece
        return total

    def cartan() -> CheckRecord:
        rng = _rng(seed, 15)
        for _ in range(max(1, count // 4)):
            field = random_vector_field(ctx, rng)
            f = random_superfunction(ctx, rng)
            lhs = lie_derivative(space, field, DerivedForm.from_superfunction(f))
            rhs = DerivedForm.from_superfunction(field.apply(f))
            if lhs != rhs:
                return _exact("exactness.cartan", f"at f = {f}: {lhs - rhs}")
        return _exact("exactness.cartan", None)

    _run(report, "exactness.koszul_square", "exact", koszul_square)
    _run(report, "exactness.derham_square", "exact",
         lambda: forms_sweep("exactness.derham_square", 11, lambda w: derham_d(space, derham_d(space, w))))
    _run(report, "exactness.inner_square", "exact",
         lambda: forms_sweep("exactness.inner_square", 12, lambda w: form_inner_delta(space, form_inner_delta(space, w))))
    _run(report, "exactness.d_delta_commute", "exact", lambda: forms_sweep("exactness.d_delta_commute", 13, d_delta))
    _run(report, "exactness.inner_is_lie_derivative", "exact",
         lambda: forms_sweep("exactness.inner_is_lie_derivative", 14, inner_vs_lie))
    _run(report, "exactness.cartan", "exact", cartan)
    return report


# -----------------------------
# Anchor and alpha maps
# -----------------------------
def lie_module(H: HamiltonianSpace) -> FreeGradedModule:
    return FreeGradedModule(H.ctx, tuple((f"E{i + 1}", 0) for i in range(H.d)), (("g", 0, H.d),))


def coadjoint_module(H: HamiltonianSpace) -> FreeGradedModule:
    return FreeGradedModule(H.ctx, tuple((f"sigma{i + 1}", 0) for i in range(H.d)), (("g*", 0, H.d),))


def anchor(H: HamiltonianSpace, convention: str | None = None) -> BlockMap:
    """rho(E_i) = sum_a (A_i x)_a d/dx_a + sum_j eta_ji iota_{sigma_j}, eta_ji = sum_k (ad*_{E_i})_jk E_k."""
    convention = convention or select_coadjoint_convention(H)
    ctx = H.ctx
    entries: dict[tuple[int, int], object] = {}
    for i, field in enumerate(H.action_fields):
        for a, value in enumerate(field):
            if value:
                entries[(a, i)] = value
        coad = coad_operator(H.lie, H.lie.basis_vector(i), convention)
        for j in range(H.d):
            eta = ctx.zero()
            for k in range(H.d):
                if coad[j][k]:
                    eta = eta + ctx.generator(k).scale(coad[j][k])
            if eta:
                entries[(H.n + j, i)] = eta
    return BlockMap.from_entries(lie_module(H), H.tangent.module, 0, entries)


def alpha_maps(H: HamiltonianSpace) -> tuple[BlockMap, BlockMap]:
    """alpha: T_Z[1] -> g*_Z and alpha*: T*_Z[-1] -> g_Z."""
    n, d = H.n, H.d
    alpha = BlockMap.from_entries(
        H.tangent.module.shifted(1), coadjoint_module(H), 0, {(j, n + j): 1 for j in range(d)}
    )
    alpha_star = BlockMap.from_entries(
        H.cotangent.module.shifted(-1), lie_module(H), 0, {(i, i): 1 for i in range(d)}
    )
    return alpha, alpha_star


def check_anchor(H: HamiltonianSpace, convention: str | None = None) -> VerificationReport:
    convention = convention or select_coadjoint_convention(H)
    report = VerificationReport()

    def chain() -> CheckRecord:
        rho = anchor(H, convention)
        result = verify_chain_map(rho, DgModule.trivial(lie_module(H)), H.tangent)
        return _exact("anchor.chain_map", result.witness, detail=f"coadjoint convention {convention}")

    def alpha_chain() -> CheckRecord:
        alpha, _ = alpha_maps(H)
        shifted = shift_dg(H.tangent, 1)
        label = "g*[-1][1]"
        sub = shifted.module.sub(label)
        sub_dg = DgModule(sub, BlockMap(sub, sub, 1, shifted.structure.block(label, label).columns))
        restricted = alpha.block("g*", label)
        return _exact("anchor.alpha_chain_map", verify_chain_map(restricted, sub_dg, DgModule.trivial(coadjoint_module(H))).witness)

    def alpha_star_chain() -> CheckRecord:
        _, alpha_star = alpha_maps(H)
        result = verify_chain_map(alpha_star, shift_dg(H.cotangent, -1), DgModule.trivial(lie_module(H)))
        return _exact("anchor.alpha_star_chain_map", result.witness)

    _run(report, "anchor.chain_map", "exact", chain)
    _run(report, "anchor.alpha_chain_map", "exact", alpha_chain)
    _run(report, "anchor.alpha_star_chain_map", "exact", alpha_star_chain)
    return report


# -----------------------------
# Total complexes
# -----------------------------
@dataclass(frozen=True, eq=False)
class TotalComplexes:
    tangent: DgModule
    cotangent: DgModule
    rho: BlockMap
    rho_dual: BlockMap
    convention: str


def dual_anchor(H: HamiltonianSpace, rho: BlockMap) -> BlockMap:
    """Koszul transpose of rho with dE_j <-> iota_{sigma_j}^v and dx_a <-> (d/dx_a)^v."""
    n, d = H.n, H.d
    source_pairing = [n + j for j in range(d)] + list(range(n))
    return koszul_transpose(rho, H.cotangent.module, coadjoint_module(H), source_pairing, list(range(d)))


def build_total_complexes(H: HamiltonianSpace, convention: str | None = None) -> TotalComplexes:
    convention = convention or select_coadjoint_convention(H)
    rho = anchor(H, convention)
    tot_t = total_complex(rho, DgModule.trivial(lie_module(H)), H.tangent, source_degree=-1)
    rho_dual = dual_anchor(H, rho)
    tot_tstar = total_complex(rho_dual, H.cotangent, DgModule.trivial(coadjoint_module(H)), source_degree=0)
    logger.debug(f"Total complexes of {H.name} built (ranks {tot_t.module.rank}, {tot_tstar.module.rank})")
    return TotalComplexes(tot_t, tot_tstar, rho, rho_dual, convention)


def _dual_order(H: HamiltonianSpace) -> list[int]:
    n, d = H.n, H.d
    return [d + n + j for j in range(d)] + [d + a for a in range(n)] + list(range(d))


def check_total_complexes(H: HamiltonianSpace, convention: str | None = None) -> VerificationReport:
    report = VerificationReport()
    totals = cache(lambda: build_total_complexes(H, convention))
    ctx, n, d = H.ctx, H.n, H.d

    def degrees() -> CheckRecord:
        expected = [-1] * d + [0] * n + [1] * d
        got = totals().tangent.module.degrees
        return _exact("total.degrees", None if got == expected else f"degrees {got}, expected {expected}")

    def tangent_cocone() -> CheckRecord:
        tm = FreeGradedModule(ctx, tuple((f"d/d{v}", 0) for v in H.variables), (("T_M", 0, n),))
        gs = coadjoint_module(H)
        dmu = BlockMap.from_entries(
            tm, gs, 0, {(j, a): H.mu[j].partial(a) for j in range(d) for a in range(n) if H.mu[j].partial(a)}
        )
        cc = cocone(dmu, DgModule.trivial(tm), DgModule.trivial(gs))
        # the cocone's sigma_j[-1] is -iota_{sigma_j} in the module of derivations
        twist = BlockMap.from_entries(cc.module, H.tangent.module, 0, {(k, k): (1 if k < n else -1) for k in range(n + d)})
        return _exact("total.tangent_cocone", verify_chain_map(twist, cc, H.tangent).witness)

    def cotangent_cone() -> CheckRecord:
        gm = FreeGradedModule(ctx, tuple((f"dE{j + 1}", 0) for j in range(d)), (("g", 0, d),))
        tsm = FreeGradedModule(ctx, tuple((f"d{v}", 0) for v in H.variables), (("T*_M", 0, n),))
        dmu_star = BlockMap.from_entries(
            gm, tsm, 0, {(a, j): H.mu[j].partial(a) for j in range(d) for a in range(n) if H.mu[j].partial(a)}
        )
        cn = cone(dmu_star, DgModule.trivial(gm), DgModule.trivial(tsm))
        diff = BlockMap(H.cotangent.module, H.cotangent.module, 1, cn.structure.columns) - H.cotangent.structure
        return _exact("total.cotangent_cone", diff.witness())

    _run(report, "total.degrees", "exact", degrees)
    _run(report, "total.tangent_square_zero", "exact",
         lambda: _exact("total.tangent_square_zero", square_residual(totals().tangent.structure).witness()))
    _run(report, "total.cotangent_square_zero", "exact",
         lambda: _exact("total.cotangent_square_zero", square_residual(totals().cotangent.structure).witness()))
    _run(report, "total.tangent_cocone", "exact", tangent_cocone)
    _run(report, "total.cotangent_cone", "exact", cotangent_cone)
    _run(report, "total.pairing_chain", "exact", lambda: _exact("total.pairing_chain", pairing_residual(H.space)))
    return report


def check_duality(H: HamiltonianSpace, convention: str | None = None) -> VerificationReport:
    report = VerificationReport()

    def duality() -> CheckRecord:
        totals = build_total_complexes(H, convention)
        dual = dual_module(totals.tangent, _dual_order(H))
        target = totals.cotangent.module
        if dual.module.degrees != target.degrees:
            return _exact("duality.tot", f"degrees {dual.module.degrees} vs {target.degrees}")
        diff = BlockMap(target, target, 1, dual.structure.columns) - totals.cotangent.structure
        return _exact("duality.tot", diff.witness())

    _run(report, "duality.tot", "exact", duality)
    return report


# -----------------------------
# The reduced form and the theorem
# -----------------------------
def reduced_form(H: HamiltonianSpace, totals: TotalComplexes) -> BlockMap:
    """omega_red^b = alpha + (iota*_Z omega)^b + alpha*, as a map Tot(T) -> Tot(T*)."""
    n, d = H.n, H.d
    alpha, alpha_star = alpha_maps(H)
    entries: dict[tuple[int, int], object] = {}
    # alpha: column c of T_Z[1] is d + c in Tot(T), sigma_j is d + n + j in Tot(T*)
    for c, col in enumerate(alpha.columns):
        for j, e in enumerate(col):
            if e:
                entries[(d + n + j, d + c)] = e
    for b in range(n):
        for a in range(n):
            if H.omega[b][a]:
                entries[(d + b, d + a)] = H.omega[b][a]
    # alpha* enters transposed, E_i[1] -> dE_i; its entries are constants so no Koszul sign
    for c, col in enumerate(alpha_star.columns):
        for i, e in enumerate(col):
            if e:
                entries[(c, i)] = e
    return BlockMap.from_entries(totals.tangent.module, totals.cotangent.module, 0, entries)


def theorem_identities(totals: TotalComplexes, w: BlockMap) -> dict[str, str | None]:
    dt, ds = totals.tangent.structure, totals.cotangent.structure
    g, tm, gs = "g[1]", "T_M", "g*[-1]"
    de, tsm, sig = "g[1]", "T*_M", "g*[-1]"
    pairs = {
        "identity_1": (compose(w.block(tsm, tm), dt.block(tm, g)), compose(ds.block(tsm, de), w.block(de, g))),
        "identity_2": (compose(w.block(sig, gs), dt.block(gs, tm)), compose(ds.block(sig, tsm), w.block(tsm, tm))),
        "identity_3": (compose(w.block(sig, gs), dt.block(gs, g)), compose(ds.block(sig, de), w.block(de, g))),
    }
    return {name: (lhs - rhs).witness() for name, (lhs, rhs) in pairs.items()}


def infinitesimal_action(H: HamiltonianSpace, k: int, totals: TotalComplexes) -> tuple[Callable[[SuperFunction], SuperFunction], BlockMap, BlockMap]:
    """The action of E_k: an even derivation of C(Z) and constant maps on both total complexes."""
    ctx, n, d = H.ctx, H.n, H.d
    field = H.action_fields[k]
    c = H.lie.structure_constants

    def on_polynomial(p: Polynomial) -> SuperFunction:
        return ctx.coerce(-poly_sum((field[a] * p.partial(a) for a in range(n)), H.variables))

    def on_generator(j: int) -> SuperFunction:
        total = ctx.zero()
        for l in range(d):
            if c[l][k][j]:
                total = total + ctx.generator(l).scale(c[l][k][j])
        return total

    def theta(f: SuperFunction) -> SuperFunction:
        return derivation(f, on_polynomial, on_generator, parity=0)

    ad = ad_operator(H.lie, H.lie.basis_vector(k))
    coad = coad_operator(H.lie, H.lie.basis_vector(k), totals.convention)
    a_k = H.action(k)
    tangent_entries: dict[tuple[int, int], object] = {}
    cotangent_entries: dict[tuple[int, int], object] = {}
    for r in range(d):
        for s in range(d):
            if ad[r][s]:
                tangent_entries[(r, s)] = ad[r][s]
                cotangent_entries[(r, s)] = ad[r][s]
            if coad[r][s]:
                tangent_entries[(d + n + r, d + n + s)] = coad[r][s]
                cotangent_entries[(d + n + r, d + n + s)] = coad[r][s]
    for a in range(n):
        for b in range(n):
            if a_k[a][b]:
                tangent_entries[(d + a, d + b)] = a_k[a][b]
            if a_k[b][a]:
                cotangent_entries[(d + a, d + b)] = -a_k[b][a]
    on_tangent = BlockMap.from_entries(totals.tangent.module, totals.tangent.module, 0, tangent_entries)
    on_cotangent = BlockMap.from_entries(totals.cotangent.module, totals.cotangent.module, 0, cotangent_entries)
    return theta, on_tangent, on_cotangent


def check_infinitesimal_equivariance(
    H: HamiltonianSpace, totals: TotalComplexes | None = None, convention: str | None = None
) -> VerificationReport:
    report = VerificationReport()
    totals_fn = cache(lambda: totals or build_total_complexes(H, convention))

    def differential_row(check_id: str, which: str) -> CheckRecord:
        tot = totals_fn()
        for k in range(H.d):
            theta, on_t, on_ts = infinitesimal_action(H, k, tot)
            dg, lam = (tot.tangent, on_t) if which == "tangent" else (tot.cotangent, on_ts)
            residual = dg.structure.apply_coefficient_derivation(theta) + compose(lam, dg.structure) - compose(dg.structure, lam)
            if residual.witness():
                return _exact(check_id, f"E_{k + 1}: {residual.witness()}")
        return _exact(check_id, None)

    def form_row() -> CheckRecord:
        tot = totals_fn()
        w = reduced_form(H, tot)
        for k in range(H.d):
            _, on_t, on_ts = infinitesimal_action(H, k, tot)
            residual = compose(on_ts, w) - compose(w, on_t)
            if residual.witness():
                return _exact("theorem.equivariance_reduced_form", f"E_{k + 1}: {residual.witness()}")
        return _exact("theorem.equivariance_reduced_form", None)

    def delta_row() -> CheckRecord:
        tot = totals_fn()
        ctx = H.ctx
        gens = [ctx.variable(a) for a in range(H.n)] + [ctx.generator(j) for j in range(H.d)]
        for k in range(H.d):
            theta, _, _ = infinitesimal_action(H, k, tot)
            for f in gens:
                diff = theta(ctx.delta(f)) - ctx.delta(theta(f))
                if diff:
                    return _exact("theorem.equivariance_delta", f"E_{k + 1} on {f}: {diff}")
        return _exact("theorem.equivariance_delta", None)

    _run(report, "theorem.equivariance_tangent", "exact", lambda: differential_row("theorem.equivariance_tangent", "tangent"))
    _run(report, "theorem.equivariance_cotangent", "exact", lambda: differential_row("theorem.equivariance_cotangent", "cotangent"))
    _run(report, "theorem.equivariance_reduced_form", "exact", form_row)
    _run(report, "theorem.equivariance_delta", "exact", delta_row)
    return report


def verify_theorem(H: HamiltonianSpace, convention: str | None = None) -> VerificationReport:
    report = VerificationReport()
    totals = cache(lambda: build_total_complexes(H, convention))
    w = cache(lambda: reduced_form(H, totals()))
    identities = cache(lambda: theorem_identities(totals(), w()))
    chain = cache(lambda: verify_chain_map(w(), totals().tangent, totals().cotangent))
    inverse = cache(lambda: invert_block_triangular(w()))

    for name in ("identity_1", "identity_2", "identity_3"):
        check_id = f"theorem.{name}"
        _run(report, check_id, "exact", lambda check_id=check_id, name=name: _exact(check_id, identities()[name]))
    _run(report, "theorem.chain_map", "exact", lambda: _exact("theorem.chain_map", chain().witness))

    def consistency() -> CheckRecord:
        identities_ok = all(v is None for v in identities().values())
        if identities_ok == chain().ok:
            return _exact("theorem.identities_match_chain_map", None)
        return _exact(
            "theorem.identities_match_chain_map",
            f"block identities {'pass' if identities_ok else 'fail'} but chain map {'passes' if chain().ok else 'fails'}",
        )

    def inverse_row(check_id: str, left: bool) -> CheckRecord:
        tot = totals()
        if left:
            product, ident = compose(inverse(), w()), BlockMap.identity(tot.tangent.module)
        else:
            product, ident = compose(w(), inverse()), BlockMap.identity(tot.cotangent.module)
        return _exact(check_id, (product - ident).witness())

    _run(report, "theorem.identities_match_chain_map", "exact", consistency)
    _run(report, "theorem.inverse_left", "exact", lambda: inverse_row("theorem.inverse_left", True))
    _run(report, "theorem.inverse_right", "exact", lambda: inverse_row("theorem.inverse_right", False))

    try:
        tot = totals()
    except Exception:
        # each equivariance row reports the construction failure itself
        tot = None
    report.extend(check_infinitesimal_equivariance(H, tot, convention))
    return report


# -----------------------------
# Group-level checks (exact reductions plus sampling)
# -----------------------------
def _omega_two_form(H: HamiltonianSpace) -> DerivedForm:
    ctx = H.ctx
    total = DerivedForm.zero(ctx)
    for a in range(H.n):
        for b in range(a + 1, H.n):
            # omega(u, v) = v^T Omega u
            coef = H.omega[b][a]
            if coef:
                total = total + DerivedForm.monomial(ctx, odd=(a, b), coef=coef)
    return total


def _mu_gradients(H: HamiltonianSpace) -> list[list[Polynomial]]:
    return [[p.partial(a) for a in range(H.n)] for p in H.mu]


def _eval_gradients(grads: list[list[Polynomial]], m: np.ndarray) -> np.ndarray:
    if not grads:
        return np.zeros((0, len(m)))
    return np.array([[g.evaluate_float(m) for g in row] for row in grads])


def _structure_array(lie: LieAlgebraData) -> np.ndarray:
    d = lie.dim
    return np.array([[[float(v) for v in row] for row in ck] for ck in lie.structure_constants]).reshape(d, d, d)


def check_closure(H: HamiltonianSpace, samples: int, seed: int, tol: float) -> VerificationReport:
    report = VerificationReport()

    def omega_closed() -> CheckRecord:
        value = derham_d(H.space, _omega_two_form(H))
        return _exact("closure.omega_closed", None if value.is_zero() else str(value))

    _run(report, "closure.omega_closed", "exact", omega_closed)
    _run(report, "closure.hamilton_reduction", "exact", lambda: _exact("closure.hamilton_reduction", _hamilton_witness(H)))
    _run(report, "closure.pairing_reduction", "exact", lambda: _exact("closure.pairing_reduction", _pairing_witness(H)))

    reason = _numeric_skip_reason(H)
    if reason:
        report.add(_skipped("closure.sampled", "numeric", reason))
        return report

    def sampled() -> CheckRecord:
        n, d = H.n, H.d
        omega = to_float(H.omega_matrix, n)
        reps = [to_float(H.action(i), n) for i in range(d)]
        c = _structure_array(H.lie)
        grads = _mu_gradients(H)
        group = sample_group(H.lie, seed, samples)
        rng = _rng(seed, 20)
        worst = 0.0
        for g in group:
            m, v1, v2 = rng.uniform(-1.0, 1.0, size=(3, n))
            x1, x2 = rng.uniform(-1.0, 1.0, size=(2, d))
            a1 = sum((x1[i] * reps[i] for i in range(d)), np.zeros((n, n)))
            a2 = sum((x2[i] * reps[i] for i in range(d)), np.zeros((n, n)))
            # s = d_0 on N_1 forgets g, t = d_1 acts with g
            lhs = v2 @ omega @ v1 - (g.matrix @ (a2 @ m + v2)) @ omega @ (g.matrix @ (a1 @ m + v1))
            grad = _eval_gradients(grads, m)
            mu_m = np.array([p.evaluate_float(m) for p in H.mu])
            bracket = np.einsum("kij,i,j->k", c, x1, x2) if d else np.zeros(0)
            rhs = (x2 @ grad) @ v1 - (x1 @ grad) @ v2 - bracket @ mu_m
            worst = max(worst, abs(float(lhs - rhs)))
        return _numeric("closure.sampled", worst, tol)

    _run(report, "closure.sampled", "numeric", sampled)
    return report


def _project(lie: LieAlgebraData, matrix: np.ndarray) -> np.ndarray:
    """Coordinates of ``matrix`` in the basis A_k (least squares)."""
    n = lie.rep_dim
    if lie.dim == 0:
        return np.zeros(0)
    basis = np.column_stack([to_float(a, n).reshape(-1) for a in lie.rep])
    coords, *_ = np.linalg.lstsq(basis, matrix.reshape(-1), rcond=None)
    return coords


def _product(g1: NumericGroupElement, g2: NumericGroupElement) -> NumericGroupElement:
    return NumericGroupElement(g1.matrix @ g2.matrix, g2.inverse @ g1.inverse, ())


def check_multiplicativity(H: HamiltonianSpace, samples: int, seed: int, tol: float) -> VerificationReport:
    report = VerificationReport()

    def jacobi() -> CheckRecord:
        result = check_lie_axioms(H.lie)
        witness = None if result.jacobi_ok else f"indices {result.witnesses['jacobi'][0]}: residual {result.witnesses['jacobi'][1]}"
        return _exact("multiplicativity.jacobi", witness)

    _run(report, "multiplicativity.jacobi", "exact", jacobi)
    reason = _numeric_skip_reason(H)
    if reason:
        report.add(_skipped("multiplicativity.ad_cocycle", "numeric", reason))
        report.add(_skipped("multiplicativity.theta_identity", "numeric", reason))
        return report

    lie, n, d = H.lie, H.n, H.d
    pairs = cache(lambda: sample_group(lie, seed, 2 * samples))

    def cocycle() -> CheckRecord:
        group = pairs()
        worst = 0.0
        for g1, g2 in zip(group[0::2], group[1::2]):
            lhs = adjoint_by_conjugation(lie, _product(g1, g2).inverted())
            rhs = adjoint_by_conjugation(lie, g2.inverted()) @ adjoint_by_conjugation(lie, g1.inverted())
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) if d else 0.0)
        return _numeric("multiplicativity.ad_cocycle", worst, tol)

    def theta_identity() -> CheckRecord:
        group = pairs()
        rng = _rng(seed, 30)
        worst = 0.0
        for g1, g2 in zip(group[0::2], group[1::2]):
            x1, x2 = rng.uniform(-1.0, 1.0, size=(2, d))
            a1, a2 = rep_matrix_float(lie, x1), rep_matrix_float(lie, x2)
            # left-trivialised tangent of (g_1, g_2) pushed through multiplication
            velocity = g1.matrix @ a1 @ g2.matrix + g1.matrix @ g2.matrix @ a2
            lhs = _project(lie, g2.inverse @ g1.inverse @ velocity)
            ad_inv = adjoint_by_series(lie, g2.algebra_vector, -g2.scale)
            rhs = ad_inv @ x1 + x2
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) if d else 0.0)
        return _numeric("multiplicativity.theta_identity", worst, tol)

    _run(report, "multiplicativity.ad_cocycle", "numeric", cocycle)
    _run(report, "multiplicativity.theta_identity", "numeric", theta_identity)
    return report


def check_reduced_pullback(H: HamiltonianSpace) -> VerificationReport:
    """Along the unit u: M -> G x M, m -> (e, m), every G-leg vanishes."""
    report = VerificationReport()
    n, d = H.n, H.d
    # du = [0; I] in (g + R^n) coordinates, theta_e = [I, 0]
    du = [[Fraction(0)] * n for _ in range(d)] + [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    theta_e = [[Fraction(int(r == c)) for c in range(d + n)] for r in range(d)]

    def theta_row() -> CheckRecord:
        for r in range(d):
            for c in range(n):
                value = sum((theta_e[r][k] * du[k][c] for k in range(d + n)), Fraction(0))
                if value:
                    return _exact("reduced_pullback.theta", f"(u* theta_{r + 1})(e_{c + 1}) = {value}")
        return _exact("reduced_pullback.theta", None)

    def d_theta_row() -> CheckRecord:
        ctx = H.ctx
        legs = [[du[k][c] for k in range(d)] for c in range(n)]
        for r in range(d):
            pulled = DerivedForm.zero(ctx)
            for c in range(n):
                value = sum((theta_e[r][k] * du[k][c] for k in range(d + n)), Fraction(0))
                if value:
                    pulled = pulled + DerivedForm.monomial(ctx, odd=(c,), coef=value)
            # u* d theta = d u* theta
            exterior = derham_d(H.space, pulled)
            # Maurer-Cartan: d theta = -1/2 [theta, theta]
            bracket = DerivedForm.zero(ctx)
            for a in range(n):
                for b in range(a + 1, n):
                    value = -H.lie.bracket(legs[a], legs[b])[r]
                    if value:
                        bracket = bracket + DerivedForm.monomial(ctx, odd=(a, b), coef=value)
            if exterior != bracket:
                return _exact(
                    "reduced_pullback.d_theta",
                    f"d(u* theta_{r + 1}) = {exterior} but the Maurer-Cartan bracket gives {bracket}",
                )
            if exterior:
                return _exact("reduced_pullback.d_theta", f"u* d theta_{r + 1} = {exterior}")
        return _exact("reduced_pullback.d_theta", None)

    _run(report, "reduced_pullback.theta", "exact", theta_row)
    _run(report, "reduced_pullback.d_theta", "exact", d_theta_row)
    return report


def check_equivariance_finite(H: HamiltonianSpace, samples: int, seed: int, tol: float, convention: str | None = None) -> VerificationReport:
    report = VerificationReport()
    ids = ("equivariance.action_transport", "equivariance.coadjoint", "equivariance.omega_invariance")
    reason = _numeric_skip_reason(H)
    if reason:
        for check_id in ids:
            report.add(_skipped(check_id, "numeric", reason))
        return report

    convention = convention or select_coadjoint_convention(H)
    sign = COADJOINT_CONVENTIONS[convention]
    lie, n, d = H.lie, H.n, H.d
    group = cache(lambda: sample_group(lie, seed, samples))
    basis = np.identity(d)

    def transport() -> CheckRecord:
        worst = 0.0
        for g in group():
            ad_inv = adjoint_by_series(lie, g.algebra_vector, -g.scale)
            for i in range(d):
                # g_* acts on linear vector fields by conjugation with g^-1
                lhs = g.inverse @ rep_matrix_float(lie, basis[i]) @ g.matrix
                rhs = rep_matrix_float(lie, ad_inv @ basis[i])
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return _numeric("equivariance.action_transport", worst, tol)

    def coadjoint() -> CheckRecord:
        worst = 0.0
        for g in group():
            ad_g = adjoint_by_series(lie, g.algebra_vector, g.scale)
            ad_inv = adjoint_by_series(lie, g.algebra_vector, -g.scale)
            for i in range(d):
                lhs = sign * ad_matrix_float(lie, ad_inv @ basis[i]).T
                rhs = coadjoint_matrix(ad_g) @ (sign * ad_matrix_float(lie, basis[i]).T) @ coadjoint_matrix(ad_inv)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return _numeric("equivariance.coadjoint", worst, tol)

    def omega_invariance() -> CheckRecord:
        omega = to_float(H.omega_matrix, n)
        worst = 0.0
        for g in group():
            worst = max(worst, float(np.max(np.abs(g.matrix.T @ omega @ g.matrix - omega))) if n else 0.0)
        return _numeric("equivariance.omega_invariance", worst, tol)

    _run(report, ids[0], "numeric", transport)
    _run(report, ids[1], "numeric", coadjoint)
    _run(report, ids[2], "numeric", omega_invariance)
    return report


def check_nerve(H: HamiltonianSpace, samples: int, seed: int, tol: float) -> VerificationReport:
    report = VerificationReport()
    reason = _numeric_skip_reason(H)
    if reason:
        report.add(_skipped("nerve.simplicial_identities", "numeric", reason))
        report.add(_skipped("nerve.cochain_square", "numeric", reason))
        return report

    def data(level: int) -> list[Simplex]:
        arrows = [g.matrix for g in sample_group(H.lie, seed, max(level, samples))]
        points = list(_rng(seed, 40 + level).uniform(-1.0, 1.0, size=(samples, H.n)))
        return random_simplices(arrows, points, level)

    def identities() -> CheckRecord:
        worst = 0.0
        for level in (2, 3):
            for s in data(level):
                worst = max(worst, simplicial_identity_residual(s))
        return _numeric("nerve.simplicial_identities", worst, tol)

    def cochain_square() -> CheckRecord:
        worst = 0.0
        simplices = data(2)
        for p in H.mu:
            f0 = lambda s, p=p: p.evaluate_float(s.point)
            ddf = cochain_differential(cochain_differential(f0, 0), 1)
            for s in simplices:
                worst = max(worst, abs(ddf(s)))
        return _numeric("nerve.cochain_square", worst, tol)

    _run(report, "nerve.simplicial_identities", "numeric", identities)
    _run(report, "nerve.cochain_square", "numeric", cochain_square)
    return report


# -----------------------------
# Points
# -----------------------------
@dataclass
class PointAnalysis:
    point: tuple[Fraction, ...]
    koszul_cohomology: dict[int, int]
    tangent_complex: tuple[int, int]
    jacobian_rank: int
    classification: str

    def describe(self) -> str:
        coords = ", ".join(str(v) for v in self.point)
        return (
            f"m=({coords}) {self.classification}: tangent complex {self.tangent_complex}, "
            f"rank D_m mu = {self.jacobian_rank}, Koszul cohomology {self.koszul_cohomology}"
        )


def analyze_point(H: HamiltonianSpace, m: Sequence[object]) -> PointAnalysis:
    point = require_zero_set(H.space, m)
    tangent = point_tangent_complex(H.space, point)
    koszul = pointwise_cohomology(koszul_complex(H.space), point)
    classification = "regular" if tangent.rank == H.d else "singular"
    return PointAnalysis(tuple(point), koszul, tangent.dims, tangent.rank, classification)


def check_points(H: HamiltonianSpace, seed: int, points: Sequence[LabeledPoint] | None = None) -> VerificationReport:
    report = VerificationReport()
    points = H.points if points is None else points

    def off_zero_set() -> CheckRecord:
        if H.d == 0:
            return _skipped("points.off_zero_set", "exact", "d = 0: every point is in the zero set")
        rng = _rng(seed, 50)
        complex_ = koszul_complex(H.space)
        found = 0
        for _ in range(50 * settings.OFF_ZERO_SET_POINTS):
            m = [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(H.n)]
            if not any(H.space.mu_at(m)):
                continue
            dims = pointwise_cohomology(complex_, m)
            if any(dims.values()):
                return _exact("points.off_zero_set", f"m = {[str(v) for v in m]}: cohomology {dims}")
            found += 1
            if found == settings.OFF_ZERO_SET_POINTS:
                break
        if found < settings.OFF_ZERO_SET_POINTS:
            return _exact("points.off_zero_set", f"only {found} sampled points lie off the zero set")
        return _exact("points.off_zero_set", None, detail=f"{found} points")

    _run(report, "points.off_zero_set", "exact", off_zero_set)

    for p in points:
        check_id = f"points.{p.label}"

        def row(p=p, check_id=check_id) -> CheckRecord:
            result = analyze_point(H, p.coords)
            if not any(result.koszul_cohomology.values()):
                return _exact(check_id, f"Koszul cohomology vanishes at a zero-set point: {result.describe()}")
            if p.expect and p.expect != result.classification:
                return _exact(check_id, f"expected {p.expect}, got {result.describe()}")
            return _exact(check_id, None, detail=result.describe())

        _run(report, check_id, "exact", row)
    return report


__all__ = [
    "HamiltonianSpace",
    "IDENTITY_CATALOGUE",
    "LabeledPoint",
    "PointAnalysis",
    "PointError",
    "TotalComplexes",
    "alpha_maps",
    "analyze_point",
    "anchor",
    "build_total_complexes",
    "check_anchor",
    "check_closure",
    "check_duality",
    "check_equivariance_finite",
    "check_exactness",
    "check_infinitesimal_equivariance",
    "check_multiplicativity",
    "check_nerve",
    "check_points",
    "check_reduced_pullback",
    "check_total_complexes",
    "infinitesimal_action",
    "reduced_form",
    "select_coadjoint_convention",
    "theorem_identities",
    "validate_hamiltonian",
    "verify_theorem",
]
