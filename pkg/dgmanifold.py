# dgmanifold.py
"""
The derived zero locus Z of a moment map and its calculus.

C(Z) = Poly[x_1..x_n] (x) Lambda(E_1..E_d) with the Koszul differential
E_j -> mu^j. Forms on Z are polynomials in x, E, dx, dE; which generators
commute is fixed once in ``sign_table``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from exactlinalg import Matrix, bareiss_rank, zeros
from exactpoly import Polynomial, as_rational
from gradedcore import (
    BlockMap,
    DgModule,
    FreeGradedModule,
    SuperContext,
    SuperFunction,
    wedge_sign,
)
from liealg import LieAlgebraData

logger = logging.getLogger(__name__)


class FormError(ValueError):
    pass


class PointError(ValueError):
    """A point that was expected to lie in the zero set of mu does not."""

    def __init__(self, message: str, values: Sequence[Fraction] = ()):
        super().__init__(message)
        self.values = list(values)


# -----------------------------
# Sign table
# -----------------------------
def sign_table() -> dict[str, dict[str, object]]:
    """Bidegree and total parity of each generator of the form algebra.

    Two generators anticommute iff both have odd total degree
    (form degree + derived degree).
    """
    table: dict[str, dict[str, object]] = {}
    for name, form_deg, derived_deg in (("x", 0, 0), ("E", 0, -1), ("dx", 1, 0), ("dE", 1, -1)):
        total = form_deg + derived_deg
        table[name] = {
            "form_degree": form_deg,
            "derived_degree": derived_deg,
            "parity": "odd" if total % 2 else "even",
        }
    return table


SIGN_TABLE = sign_table()


def _is_odd(kind: str) -> bool:
    return SIGN_TABLE[kind]["parity"] == "odd"


# odd letters (dx, E) form the exterior word; even letters (dE) a commuting multiset
if not (_is_odd("dx") and _is_odd("E")) or _is_odd("dE") or _is_odd("x"):
    raise RuntimeError("form storage layout does not match the sign table")


# -----------------------------
# The space
# -----------------------------
@dataclass(frozen=True)
class QuasiSmoothSpace:
    lie: LieAlgebraData
    mu: tuple[Polynomial, ...]
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.mu) != self.lie.dim:
            raise FormError(f"mu has {len(self.mu)} components, the Lie algebra has dimension {self.lie.dim}")
        object.__setattr__(self, "mu", tuple(p.with_variables(self.variables) for p in self.mu))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def d(self) -> int:
        return self.lie.dim

    @cached_property
    def ctx(self) -> SuperContext:
        return SuperContext(self.variables, self.d, self.mu)

    def mu_at(self, point: Sequence[object]) -> list[Fraction]:
        return [p.evaluate(point) for p in self.mu]

    def jacobian(self) -> list[list[Polynomial]]:
        """J[j][a] = d mu^j / d x_a."""
        return [[p.partial(a) for a in range(self.n)] for p in self.mu]


def koszul_delta(space: QuasiSmoothSpace, f: SuperFunction) -> SuperFunction:
    if f.ctx != space.ctx:
        raise FormError("SuperFunction does not live on this space")
    return space.ctx.delta(f)


def koszul_complex(space: QuasiSmoothSpace) -> DgModule:
    """C(Z) as a rank-one dg-module over itself."""
    module = FreeGradedModule(space.ctx, (("1", 0),), (("C(Z)", 0, 1),))
    return DgModule.trivial(module)


# -----------------------------
# Forms
# -----------------------------
FormKey = tuple[tuple[int, ...], tuple[int, ...]]  # (odd word, dE multiset)


class DerivedForm:
    """Finite sum of p(x) * dE_J * w_I with w_I a word in dx_a (0..n-1) and E_j (n..n+d-1)."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: SuperContext, terms: Mapping[FormKey, Polynomial] | None = None):
        self.ctx = ctx
        acc: dict[FormKey, Polynomial] = {}
        n, d = ctx.nvars, ctx.dim
        for (odd, even), coef in (terms or {}).items():
            odd, even = tuple(odd), tuple(sorted(even))
            if any(not 0 <= o < n + d for o in odd) or any(not 0 <= e < d for e in even):
                raise FormError(f"form monomial {(odd, even)} out of range")
            if len(set(odd)) != len(odd):
                continue
            word = tuple(sorted(odd))
            inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
            coef = coef if isinstance(coef, Polynomial) else Polynomial.constant(as_rational(coef), ctx.variables)
            coef = coef.with_variables(ctx.variables)
            if inversions % 2:
                coef = -coef
            key = (word, even)
            acc[key] = acc[key] + coef if key in acc else coef
        self._terms = tuple(sorted(((k, p) for k, p in acc.items() if p), key=lambda t: (len(t[0][0]) + len(t[0][1]), t[0])))

    # -----------------------------
    # Constructors
    # -----------------------------
    @classmethod
    def zero(cls, ctx: SuperContext) -> "DerivedForm":
        return cls(ctx)

    @classmethod
    def monomial(cls, ctx: SuperContext, odd: Sequence[int] = (), even: Sequence[int] = (), coef: object = 1) -> "DerivedForm":
        return cls(ctx, {(tuple(odd), tuple(even)): coef if isinstance(coef, Polynomial) else Polynomial.constant(as_rational(coef), ctx.variables)})

    @classmethod
    def from_superfunction(cls, f: SuperFunction) -> "DerivedForm":
        n = f.ctx.nvars
        return cls(f.ctx, {(tuple(n + s for s in s_set), ()): p for s_set, p in f.terms()})

    @classmethod
    def from_polynomial(cls, ctx: SuperContext, p: Polynomial) -> "DerivedForm":
        return cls(ctx, {((), ()): p})

    @classmethod
    def dx(cls, ctx: SuperContext, a: int) -> "DerivedForm":
        return cls.monomial(ctx, odd=(a,))

    @classmethod
    def dE(cls, ctx: SuperContext, j: int) -> "DerivedForm":
        return cls.monomial(ctx, even=(j,))

    @classmethod
    def E(cls, ctx: SuperContext, j: int) -> "DerivedForm":
        return cls.monomial(ctx, odd=(ctx.nvars + j,))

    # -----------------------------
    # Queries
    # -----------------------------
    def terms(self) -> tuple[tuple[FormKey, Polynomial], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _form_degree(self, key: FormKey) -> int:
        odd, even = key
        return sum(1 for o in odd if o < self.ctx.nvars) + len(even)

    def _derived_degree(self, key: FormKey) -> int:
        odd, even = key
        return -len(even) - sum(1 for o in odd if o >= self.ctx.nvars)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(self._form_degree(k), self._derived_degree(k)) for k, _ in self._terms}

    def form_degrees(self) -> set[int]:
        return {self._form_degree(k) for k, _ in self._terms}

    def component(self, p: int, q: int | None = None) -> "DerivedForm":
        return DerivedForm(
            self.ctx,
            {
                k: c
                for k, c in self._terms
                if self._form_degree(k) == p and (q is None or self._derived_degree(k) == q)
            },
        )

    def to_superfunction(self) -> SuperFunction:
        n = self.ctx.nvars
        out: dict[tuple[int, ...], Polynomial] = {}
        for (odd, even), p in self._terms:
            if even or any(o < n for o in odd):
                raise FormError(f"{self} is not a 0-form")
            out[tuple(o - n for o in odd)] = p
        return SuperFunction(self.ctx, out)

    def one_form_coefficients(self) -> tuple[list[SuperFunction], list[SuperFunction]]:
        """Left coefficients on dx_a and dE_j of a 1-form."""
        ctx, n = self.ctx, self.ctx.nvars
        dx_coeffs = [ctx.zero() for _ in range(n)]
        de_coeffs = [ctx.zero() for _ in range(ctx.dim)]
        for (odd, even), p in self._terms:
            e_word = tuple(o - n for o in odd if o >= n)
            dxs = [o for o in odd if o < n]
            if len(even) == 1 and not dxs:
                de_coeffs[even[0]] = de_coeffs[even[0]] + SuperFunction.monomial(ctx, e_word, p)
            elif not even and len(dxs) == 1:
                # p dx_a E_S = (-1)^{|S|} p E_S dx_a
                term = SuperFunction.monomial(ctx, e_word, p)
                dx_coeffs[dxs[0]] = dx_coeffs[dxs[0]] + (-term if len(e_word) % 2 else term)
            else:
                raise FormError(f"{self} is not a 1-form")
        return dx_coeffs, de_coeffs

    # -----------------------------
    # Arithmetic
    # -----------------------------
    def _check(self, other: "DerivedForm") -> None:
        if other.ctx != self.ctx:
            raise FormError("forms live on different spaces")

    def __add__(self, other: "DerivedForm") -> "DerivedForm":
        self._check(other)
        acc = dict(self._terms)
        for k, p in other._terms:
            acc[k] = acc[k] + p if k in acc else p
        return DerivedForm(self.ctx, acc)

    def __neg__(self) -> "DerivedForm":
        return DerivedForm(self.ctx, {k: -p for k, p in self._terms})

    def __sub__(self, other: "DerivedForm") -> "DerivedForm":
        return self + (-other)

    def __mul__(self, other: "DerivedForm") -> "DerivedForm":
        self._check(other)
        acc: dict[FormKey, Polynomial] = {}
        for (o1, e1), p1 in self._terms:
            for (o2, e2), p2 in other._terms:
                sign, word = wedge_sign(o1, o2)
                if not sign:
                    continue
                key = (word, tuple(sorted(e1 + e2)))
                term = p1 * p2 if sign > 0 else -(p1 * p2)
                acc[key] = acc[key] + term if key in acc else term
        return DerivedForm(self.ctx, acc)

    def scale(self, factor: object) -> "DerivedForm":
        if isinstance(factor, Polynomial):
            return DerivedForm(self.ctx, {k: p * factor for k, p in self._terms})
        f = as_rational(factor)
        return DerivedForm(self.ctx, {k: p.scale(f) for k, p in self._terms})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DerivedForm):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        n = self.ctx.nvars
        parts = []
        for (odd, even), p in self._terms:
            letters = [f"dE{e + 1}" for e in even]
            letters += [f"d{self.ctx.variables[o]}" if o < n else f"E{o - n + 1}" for o in odd]
            word = "*".join(letters)
            if not word:
                parts.append(f"({p})")
            else:
                parts.append(word if p == 1 else f"({p})*{word}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DerivedForm({self})"


def _word_form(ctx: SuperContext, odd: Sequence[int], even: Sequence[int], coef: Polynomial) -> DerivedForm:
    return DerivedForm(ctx, {(tuple(odd), tuple(even)): coef})


def _apply_form_derivation(
    form: DerivedForm,
    on_x: Callable[[int], DerivedForm],
    on_de: Callable[[int], DerivedForm],
    on_odd: Callable[[int], DerivedForm],
    parity: int,
) -> DerivedForm:
    """Extend generator images to a derivation of the given parity.

    Each term p * dE_J * w_I is treated as the ordered product of its factors;
    only the odd letters of w_I contribute Koszul signs.
    """
    ctx = form.ctx
    one = Polynomial.constant(1, ctx.variables)
    total = DerivedForm.zero(ctx)
    x_images = [on_x(a) for a in range(ctx.nvars)]
    for (odd, even), p in form.terms():
        rest = _word_form(ctx, odd, even, one)
        for a, img in enumerate(x_images):
            if img:
                dp = p.partial(a)
                if dp:
                    total = total + DerivedForm.from_polynomial(ctx, dp) * img * rest
        for i, e in enumerate(even):
            img = on_de(e)
            if img:
                before = _word_form(ctx, (), even[:i], p)
                after = _word_form(ctx, odd, even[i + 1:], one)
                total = total + before * img * after
        for j, o in enumerate(odd):
            img = on_odd(o)
            if img:
                before = _word_form(ctx, odd[:j], even, p)
                after = _word_form(ctx, odd[j + 1:], (), one)
                piece = before * img * after
                total = total - piece if parity % 2 and j % 2 else total + piece
    return total


def _zero_image(ctx: SuperContext) -> Callable[[int], DerivedForm]:
    zero = DerivedForm.zero(ctx)
    return lambda _: zero


def derham_d(space: QuasiSmoothSpace, form: DerivedForm) -> DerivedForm:
    ctx = space.ctx
    n = ctx.nvars
    return _apply_form_derivation(
        form,
        on_x=lambda a: DerivedForm.dx(ctx, a),
        on_de=_zero_image(ctx),
        on_odd=lambda o: DerivedForm.zero(ctx) if o < n else DerivedForm.dE(ctx, o - n),
        parity=1,
    )


def _dmu(space: QuasiSmoothSpace, j: int) -> DerivedForm:
    ctx = space.ctx
    total = DerivedForm.zero(ctx)
    for a in range(space.n):
        coef = space.mu[j].partial(a)
        if coef:
            total = total + _word_form(ctx, (a,), (), coef)
    return total


def inner_lie_derivation(space: QuasiSmoothSpace, form: DerivedForm) -> DerivedForm:
    """The odd derivation E_j -> mu^j, dE_j -> -d mu^j (zero on x and dx)."""
    ctx = space.ctx
    n = ctx.nvars
    return _apply_form_derivation(
        form,
        on_x=_zero_image(ctx),
        on_de=lambda j: -_dmu(space, j),
        on_odd=lambda o: DerivedForm.zero(ctx) if o < n else DerivedForm.from_polynomial(ctx, space.mu[o - n]),
        parity=1,
    )


def form_inner_delta(space: QuasiSmoothSpace, form: DerivedForm) -> DerivedForm:
    """(-1)^p times the inner Lie derivation on the form-degree-p part."""
    total = DerivedForm.zero(space.ctx)
    for p in sorted(form.form_degrees()):
        piece = inner_lie_derivation(space, form.component(p))
        total = total - piece if p % 2 else total + piece
    return total


# -----------------------------
# Vector fields
# -----------------------------
@dataclass(frozen=True, eq=False)
class VectorFieldOnZ:
    """sum_a f_a d/dx_a + sum_j g_j iota_{sigma_j}, coefficients on the left."""

    ctx: SuperContext
    smooth_part: tuple[SuperFunction, ...]
    contraction_part: tuple[SuperFunction, ...]

    def __post_init__(self):
        if len(self.smooth_part) != self.ctx.nvars or len(self.contraction_part) != self.ctx.dim:
            raise FormError("vector field needs n smooth and d contraction coefficients")

    @classmethod
    def basis_partial(cls, ctx: SuperContext, a: int) -> "VectorFieldOnZ":
        smooth = tuple(ctx.one() if b == a else ctx.zero() for b in range(ctx.nvars))
        return cls(ctx, smooth, tuple(ctx.zero() for _ in range(ctx.dim)))

    @classmethod
    def basis_contraction(cls, ctx: SuperContext, j: int) -> "VectorFieldOnZ":
        contraction = tuple(ctx.one() if k == j else ctx.zero() for k in range(ctx.dim))
        return cls(ctx, tuple(ctx.zero() for _ in range(ctx.nvars)), contraction)

    def apply(self, f: SuperFunction) -> SuperFunction:
        total = self.ctx.zero()
        for a, coef in enumerate(self.smooth_part):
            if coef:
                total = total + coef * f.partial(a)
        for j, coef in enumerate(self.contraction_part):
            if coef:
                total = total + coef * f.contract_generator(j)
        return total

    def pieces(self) -> Iterator[tuple[str, int, SuperFunction, int]]:
        """Homogeneous elementary pieces (kind, index, coefficient, degree of the field)."""
        for a, coef in enumerate(self.smooth_part):
            for k, comp in coef.components().items():
                yield "smooth", a, comp, k
        for j, coef in enumerate(self.contraction_part):
            for k, comp in coef.components().items():
                yield "contraction", j, comp, k + 1

    def homogeneous_components(self) -> dict[int, "VectorFieldOnZ"]:
        out: dict[int, VectorFieldOnZ] = {}
        for degree in sorted({deg for *_, deg in self.pieces()}):
            smooth = tuple(c.component(degree) for c in self.smooth_part)
            contraction = tuple(c.component(degree - 1) for c in self.contraction_part)
            out[degree] = VectorFieldOnZ(self.ctx, smooth, contraction)
        return out

    def commutator_with_delta(self) -> "VectorFieldOnZ":
        """[delta, V] = delta V - (-1)^{|V|} V delta, read off on generators."""
        ctx = self.ctx
        smooth = [ctx.zero() for _ in range(ctx.nvars)]
        contraction = [ctx.zero() for _ in range(ctx.dim)]
        for degree, part in self.homogeneous_components().items():
            sign = -1 if degree % 2 else 1
            for b in range(ctx.nvars):
                # delta(x_b) = 0
                smooth[b] = smooth[b] + ctx.delta(part.apply(ctx.variable(b)))
            for k in range(ctx.dim):
                value = ctx.delta(part.apply(ctx.generator(k))) - part.apply(ctx.coerce(ctx.mu[k])).scale(sign)
                contraction[k] = contraction[k] + value
        return VectorFieldOnZ(ctx, tuple(smooth), tuple(contraction))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorFieldOnZ):
            return NotImplemented
        return self.smooth_part == other.smooth_part and self.contraction_part == other.contraction_part


def homological_vector_field(space: QuasiSmoothSpace) -> VectorFieldOnZ:
    """Q = sum_j mu^j iota_{sigma_j}; Q(f) is the Koszul differential of f."""
    ctx = space.ctx
    return VectorFieldOnZ(ctx, tuple(ctx.zero() for _ in range(ctx.nvars)), tuple(ctx.coerce(m) for m in space.mu))


def _contract_basis(form: DerivedForm, kind: str, index: int) -> DerivedForm:
    ctx = form.ctx
    one = DerivedForm.from_polynomial(ctx, Polynomial.constant(1, ctx.variables))
    zero = _zero_image(ctx)
    if kind == "smooth":
        # iota_{d/dx_a}: odd, dx_b -> delta_ab
        return _apply_form_derivation(
            form, on_x=zero, on_de=zero, on_odd=lambda o: one if o == index else DerivedForm.zero(ctx), parity=1
        )
    # iota_{iota_sigma_j}: even, dE_k -> delta_jk
    return _apply_form_derivation(
        form, on_x=zero, on_de=lambda e: one if e == index else DerivedForm.zero(ctx), on_odd=zero, parity=0
    )


def _contract(field: VectorFieldOnZ, form: DerivedForm) -> DerivedForm:
    total = DerivedForm.zero(form.ctx)
    for a, coef in enumerate(field.smooth_part):
        if coef:
            total = total + DerivedForm.from_superfunction(coef) * _contract_basis(form, "smooth", a)
    for j, coef in enumerate(field.contraction_part):
        if coef:
            total = total + DerivedForm.from_superfunction(coef) * _contract_basis(form, "contraction", j)
    return total


def contract(field: VectorFieldOnZ, form: DerivedForm) -> DerivedForm:
    if field.ctx != form.ctx:
        raise FormError("vector field and form live on different spaces")
    if form and form.form_degrees() == {0}:
        raise FormError(f"cannot contract a vector field into the 0-form {form}")
    return _contract(field, form)


def lie_derivative(space: QuasiSmoothSpace, field: VectorFieldOnZ, form: DerivedForm) -> DerivedForm:
    """L_V = iota_V d - (-1)^t d iota_V, t the parity of iota_V, summed over homogeneous pieces."""
    ctx = space.ctx
    total = DerivedForm.zero(ctx)
    d_form = derham_d(space, form)
    for kind, index, coef, _ in field.pieces():
        base_parity = 1 if kind == "smooth" else 0
        t = (base_parity + (coef.homogeneous_degree() or 0)) % 2
        piece = VectorFieldOnZ(
            ctx,
            tuple(coef if kind == "smooth" and a == index else ctx.zero() for a in range(ctx.nvars)),
            tuple(coef if kind == "contraction" and j == index else ctx.zero() for j in range(ctx.dim)),
        )
        first = _contract(piece, d_form)
        second = derham_d(space, _contract(piece, form))
        total = total + first - second if t == 0 else total + first + second
    return total


def pairing(field: VectorFieldOnZ, form: DerivedForm) -> SuperFunction:
    """<V, alpha> for a 1-form alpha."""
    return contract(field, form).to_superfunction()


# -----------------------------
# Tangent and cotangent modules
# -----------------------------
def tangent_fields(space: QuasiSmoothSpace) -> list[VectorFieldOnZ]:
    ctx = space.ctx
    return [VectorFieldOnZ.basis_partial(ctx, a) for a in range(space.n)] + [
        VectorFieldOnZ.basis_contraction(ctx, j) for j in range(space.d)
    ]


def cotangent_forms(space: QuasiSmoothSpace) -> list[DerivedForm]:
    ctx = space.ctx
    return [DerivedForm.dE(ctx, j) for j in range(space.d)] + [DerivedForm.dx(ctx, a) for a in range(space.n)]


def tangent_basis(space: QuasiSmoothSpace) -> FreeGradedModule:
    basis = [(f"d/d{v}", 0) for v in space.variables] + [(f"iota_sigma{j + 1}", 1) for j in range(space.d)]
    return FreeGradedModule(space.ctx, tuple(basis), (("T_M", 0, space.n), ("g*[-1]", space.n, space.n + space.d)))


def cotangent_basis(space: QuasiSmoothSpace) -> FreeGradedModule:
    basis = [(f"dE{j + 1}", -1) for j in range(space.d)] + [(f"d{v}", 0) for v in space.variables]
    return FreeGradedModule(space.ctx, tuple(basis), (("g[1]", 0, space.d), ("T*_M", space.d, space.d + space.n)))


def tangent_module(space: QuasiSmoothSpace) -> DgModule:
    """Derivations of C(Z) with differential [delta, -]."""
    module = tangent_basis(space)
    entries = {}
    for c, field in enumerate(tangent_fields(space)):
        image = field.commutator_with_delta()
        for r, coef in enumerate(list(image.smooth_part) + list(image.contraction_part)):
            if coef:
                entries[(r, c)] = coef
    logger.debug(f"Tangent module of rank {module.rank} assembled")
    return DgModule(module, BlockMap.from_entries(module, module, 1, entries))


def cotangent_module(space: QuasiSmoothSpace) -> DgModule:
    """dE_j, dx_a with differential the inner differential on forms."""
    module = cotangent_basis(space)
    entries = {}
    for c, form in enumerate(cotangent_forms(space)):
        dx_coeffs, de_coeffs = form_inner_delta(space, form).one_form_coefficients()
        for r, coef in enumerate(de_coeffs + dx_coeffs):
            if coef:
                entries[(r, c)] = coef
    logger.debug(f"Cotangent module of rank {module.rank} assembled")
    return DgModule(module, BlockMap.from_entries(module, module, 1, entries))


def pairing_residual(space: QuasiSmoothSpace) -> str | None:
    """First basis pair violating <dv, a> + (-1)^|v| <v, da> = delta<v, a>, or None."""
    fields = tangent_fields(space)
    forms = cotangent_forms(space)
    tangent = tangent_basis(space)
    for c, v in enumerate(fields):
        dv = v.commutator_with_delta()
        for alpha in forms:
            lhs = pairing(dv, alpha)
            d_alpha = form_inner_delta(space, alpha)
            rhs = pairing(v, d_alpha) if d_alpha else space.ctx.zero()
            total = lhs - rhs if tangent.degree(c) % 2 else lhs + rhs
            expected = space.ctx.delta(pairing(v, alpha))
            if total != expected:
                return f"<{tangent.names[c]}, {alpha}>: {total - expected}"
    return None


# -----------------------------
# Points
# -----------------------------
@dataclass
class PointTangentComplex:
    jacobian: Matrix
    rank: int
    kernel_dim: int
    cokernel_dim: int

    @property
    def dims(self) -> tuple[int, int]:
        return self.kernel_dim, self.cokernel_dim


def require_zero_set(space: QuasiSmoothSpace, point: Sequence[object]) -> list[Fraction]:
    point = [as_rational(v) for v in point]
    if len(point) != space.n:
        raise PointError(f"point has {len(point)} coordinates, expected {space.n}")
    values = space.mu_at(point)
    if any(values):
        shown = ", ".join(str(v) for v in values)
        raise PointError(f"point {[str(v) for v in point]} is not in the zero set: mu = ({shown})", values)
    return point


def point_derivations(space: QuasiSmoothSpace, point: Sequence[object]) -> Matrix:
    """Matrix of v -> v o delta from ev_m o d/dx_a to ev_m o iota_{sigma_j}."""
    point = require_zero_set(space, point)
    ctx = space.ctx
    out = zeros(space.d, space.n)
    for a in range(space.n):
        for j in range(space.d):
            value = ctx.delta(ctx.generator(j)).partial(a).evaluate(point)
            out[j][a] = value.get((), Fraction(0))
    return out


def point_tangent_complex(space: QuasiSmoothSpace, point: Sequence[object]) -> PointTangentComplex:
    jac = point_derivations(space, point)
    rank = bareiss_rank(jac) if space.d and space.n else 0
    return PointTangentComplex(jac, rank, space.n - rank, space.d - rank)


# -----------------------------
# Random elements for identity sweeps
# -----------------------------
def random_polynomial(variables: Sequence[str], rng: np.random.Generator, max_terms: int = 2, max_degree: int = 2) -> Polynomial:
    n = len(variables)
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        mono = [0] * n
        if n:
            for _ in range(int(rng.integers(0, max_degree + 1))):
                mono[int(rng.integers(n))] += 1
        coef = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
        terms[tuple(mono)] = terms.get(tuple(mono), Fraction(0)) + coef
    return Polynomial(variables, terms)


def _random_subset(rng: np.random.Generator, size: int, max_len: int) -> tuple[int, ...]:
    k = int(rng.integers(0, min(size, max_len) + 1))
    return tuple(sorted(int(v) for v in rng.choice(size, size=k, replace=False))) if k else ()


def random_superfunction(ctx: SuperContext, rng: np.random.Generator, max_terms: int = 3) -> SuperFunction:
    terms: dict[tuple[int, ...], Polynomial] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        s_set = _random_subset(rng, ctx.dim, 2)
        p = random_polynomial(ctx.variables, rng)
        terms[s_set] = terms[s_set] + p if s_set in terms else p
    return SuperFunction(ctx, terms)


def random_form(ctx: SuperContext, rng: np.random.Generator, max_terms: int = 2) -> DerivedForm:
    terms: dict[FormKey, Polynomial] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        odd = _random_subset(rng, ctx.nvars + ctx.dim, 2)
        even = tuple(int(v) for v in rng.integers(0, ctx.dim, size=int(rng.integers(0, 2)))) if ctx.dim else ()
        p = random_polynomial(ctx.variables, rng)
        key = (odd, even)
        terms[key] = terms[key] + p if key in terms else p
    return DerivedForm(ctx, terms)


def random_vector_field(ctx: SuperContext, rng: np.random.Generator) -> VectorFieldOnZ:
    smooth = tuple(random_superfunction(ctx, rng, 2) for _ in range(ctx.nvars))
    contraction = tuple(random_superfunction(ctx, rng, 2) for _ in range(ctx.dim))
    return VectorFieldOnZ(ctx, smooth, contraction)
