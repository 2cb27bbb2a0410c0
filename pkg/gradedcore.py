# gradedcore.py
"""
Free graded modules over C(Z) = Poly[x] (x) Lambda(E_1..E_d) and block maps
between them.

Sign rules (coefficients act from the left):
  * a map F of degree p acts by F(f e_c) = (-1)^{p|f|} f F(e_c)
  * entry (r, c) has forced degree deg_c + p - deg_r
  * (G o F)_{r'c} = sum_r (-1)^{|G| |F_rc|} F_rc G_{r'r}
  * a dg-module is (basis, D) with d(f e_c) = delta(f) e_c + (-1)^{|f|} f D(e_c)
Shifts use left suspension: shifting negates D_rc by -(-1)^{|D_rc|}.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from exactlinalg import Matrix, bareiss_rank, first_nonzero, inverse, mat_mul, zeros
from exactpoly import Polynomial, as_rational

logger = logging.getLogger(__name__)

SHIFT_CONVENTION = "left-suspension"

Subset = tuple[int, ...]


class GradedError(ValueError):
    pass


class ChainMapError(GradedError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class SquareZeroError(GradedError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class InternalConsistencyError(GradedError):
    pass


def wedge_sign(left: Subset, right: Subset) -> tuple[int, Subset]:
    """Sign and merged index set of E_left * E_right (sign 0 if they overlap)."""
    if set(left) & set(right):
        return 0, ()
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


def _subset_key(s: Subset) -> tuple[int, Subset]:
    return len(s), s


def all_subsets(d: int) -> list[Subset]:
    return [s for k in range(d + 1) for s in combinations(range(d), k)]


# -----------------------------
# Coefficient algebra
# -----------------------------
@dataclass(frozen=True)
class SuperContext:
    """Polynomial variables, number of odd generators, and their Koszul images."""

    variables: tuple[str, ...]
    dim: int
    mu: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.mu) != self.dim:
            raise GradedError(f"expected {self.dim} Koszul images, got {len(self.mu)}")
        object.__setattr__(self, "mu", tuple(p.with_variables(self.variables) for p in self.mu))

    @classmethod
    def trivial(cls, variables: Sequence[str], dim: int) -> "SuperContext":
        variables = tuple(variables)
        return cls(variables, dim, tuple(Polynomial.zero(variables) for _ in range(dim)))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self) -> "SuperFunction":
        return SuperFunction(self)

    def one(self) -> "SuperFunction":
        return SuperFunction.monomial(self, (), Polynomial.constant(1, self.variables))

    def generator(self, j: int) -> "SuperFunction":
        if not 0 <= j < self.dim:
            raise GradedError(f"generator index {j} out of range for dim {self.dim}")
        return SuperFunction.monomial(self, (j,), Polynomial.constant(1, self.variables))

    def polynomial(self, p: object) -> "SuperFunction":
        return self.coerce(p)

    def variable(self, a: int | str) -> "SuperFunction":
        return self.coerce(Polynomial.variable(a, self.variables))

    def coerce(self, value: object) -> "SuperFunction":
        if isinstance(value, SuperFunction):
            if value.ctx != self:
                raise GradedError("SuperFunction belongs to a different context")
            return value
        if isinstance(value, Polynomial):
            return SuperFunction.monomial(self, (), value.with_variables(self.variables))
        return SuperFunction.monomial(self, (), Polynomial.constant(as_rational(value), self.variables))

    def delta(self, f: "SuperFunction") -> "SuperFunction":
        """Koszul differential: the odd derivation with E_j -> mu^j."""
        f = self.coerce(f)
        acc: dict[Subset, Polynomial] = {}
        for s_set, p in f.terms():
            for i, s in enumerate(s_set):
                rest = s_set[:i] + s_set[i + 1:]
                term = self.mu[s] * p
                if i % 2:
                    term = -term
                acc[rest] = acc[rest] + term if rest in acc else term
        return SuperFunction(self, acc)


class SuperFunction:
    """Element of C(Z): a finite map from E-monomials to polynomials."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: SuperContext, terms: Mapping[Sequence[int], object] | None = None):
        self.ctx = ctx
        cleaned: dict[Subset, Polynomial] = {}
        for s_set, coef in (terms or {}).items():
            s_set = tuple(s_set)
            if any(not 0 <= s < ctx.dim for s in s_set):
                raise GradedError(f"E-monomial {s_set} out of range for dim {ctx.dim}")
            if len(set(s_set)) != len(s_set):
                continue
            # reorder the given word into increasing order, tracking the sign
            ordered = tuple(sorted(s_set))
            sign = _permutation_sign(s_set)
            if not isinstance(coef, Polynomial):
                coef = Polynomial.constant(as_rational(coef), ctx.variables)
            else:
                coef = coef.with_variables(ctx.variables)
            if sign < 0:
                coef = -coef
            cleaned[ordered] = cleaned[ordered] + coef if ordered in cleaned else coef
        self._terms = tuple(sorted(((s, p) for s, p in cleaned.items() if p), key=lambda t: _subset_key(t[0])))

    @classmethod
    def monomial(cls, ctx: SuperContext, s_set: Subset, p: Polynomial | None = None) -> "SuperFunction":
        if p is None:
            p = Polynomial.constant(1, ctx.variables)
        return cls(ctx, {tuple(s_set): p})

    # -----------------------------
    # Queries
    # -----------------------------
    def terms(self) -> tuple[tuple[Subset, Polynomial], ...]:
        return self._terms

    def coefficient(self, s_set: Sequence[int]) -> Polynomial:
        s_set = tuple(s_set)
        for s, p in self._terms:
            if s == s_set:
                return p
        return Polynomial.zero(self.ctx.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degrees(self) -> set[int]:
        return {-len(s) for s, _ in self._terms}

    def homogeneous_degree(self) -> int | None:
        """Degree of a homogeneous element, None for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise GradedError(f"{self} is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def component(self, k: int) -> "SuperFunction":
        return SuperFunction(self.ctx, {s: p for s, p in self._terms if -len(s) == k})

    def components(self) -> dict[int, "SuperFunction"]:
        return {k: self.component(k) for k in sorted(self.degrees())}

    def polynomial_part(self) -> Polynomial:
        return self.coefficient(())

    # -----------------------------
    # Arithmetic
    # -----------------------------
    def _other(self, other: object) -> "SuperFunction":
        return self.ctx.coerce(other)

    def __add__(self, other: object) -> "SuperFunction":
        other = self._other(other)
        acc = dict(self._terms)
        for s, p in other._terms:
            acc[s] = acc[s] + p if s in acc else p
        return SuperFunction(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self) -> "SuperFunction":
        return SuperFunction(self.ctx, {s: -p for s, p in self._terms})

    def __sub__(self, other: object) -> "SuperFunction":
        return self + (-self._other(other))

    def __rsub__(self, other: object) -> "SuperFunction":
        return self._other(other) - self

    def __mul__(self, other: object) -> "SuperFunction":
        return super_mul(self, self._other(other))

    def __rmul__(self, other: object) -> "SuperFunction":
        return super_mul(self._other(other), self)

    def scale(self, factor: object) -> "SuperFunction":
        if isinstance(factor, Polynomial):
            return SuperFunction(self.ctx, {s: p * factor for s, p in self._terms})
        f = as_rational(factor)
        return SuperFunction(self.ctx, {s: p.scale(f) for s, p in self._terms})

    def partial(self, a: int | str) -> "SuperFunction":
        return SuperFunction(self.ctx, {s: p.partial(a) for s, p in self._terms})

    def contract_generator(self, j: int) -> "SuperFunction":
        """The odd derivation iota_{sigma_j}: E_k -> delta_jk."""
        acc: dict[Subset, Polynomial] = {}
        for s_set, p in self._terms:
            if j in s_set:
                i = s_set.index(j)
                rest = s_set[:i] + s_set[i + 1:]
                acc[rest] = -p if i % 2 else p
        return SuperFunction(self.ctx, acc)

    def evaluate(self, point: Sequence[object]) -> dict[Subset, Fraction]:
        out = {s: p.evaluate(point) for s, p in self._terms}
        return {s: v for s, v in out.items() if v}

    # -----------------------------
    # Equality / display
    # -----------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, SuperFunction):
            return self.ctx == other.ctx and self._terms == other._terms
        if isinstance(other, (int, Fraction, Polynomial)) and not isinstance(other, bool):
            return self == self.ctx.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for s, p in self._terms:
            if not s:
                parts.append(f"({p})")
            else:
                word = "*".join(f"E{i + 1}" for i in s)
                parts.append(word if p == 1 else f"({p})*{word}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SuperFunction({self})"


def _permutation_sign(word: Sequence[int]) -> int:
    inversions = sum(1 for a, b in combinations(word, 2) if a > b)
    return -1 if inversions % 2 else 1


def super_mul(a: SuperFunction, b: SuperFunction) -> SuperFunction:
    if a.ctx != b.ctx:
        raise GradedError(
            f"context mismatch: variables {list(a.ctx.variables)} / dim {a.ctx.dim} "
            f"vs {list(b.ctx.variables)} / dim {b.ctx.dim}"
        )
    acc: dict[Subset, Polynomial] = {}
    for s1, p1 in a.terms():
        for s2, p2 in b.terms():
            sign, merged = wedge_sign(s1, s2)
            if not sign:
                continue
            term = p1 * p2
            if sign < 0:
                term = -term
            acc[merged] = acc[merged] + term if merged in acc else term
    return SuperFunction(a.ctx, acc)


def derivation(
    f: SuperFunction,
    on_polynomial: Callable[[Polynomial], SuperFunction] | None,
    on_generator: Callable[[int], SuperFunction],
    parity: int,
) -> SuperFunction:
    """Apply the derivation determined by its values on polynomials and on E_j."""
    ctx = f.ctx
    total = ctx.zero()
    for s_set, p in f.terms():
        if on_polynomial is not None:
            total = total + on_polynomial(p) * SuperFunction.monomial(ctx, s_set)
        for i, s in enumerate(s_set):
            image = on_generator(s)
            if image.is_zero():
                continue
            piece = SuperFunction.monomial(ctx, s_set[:i], p) * image * SuperFunction.monomial(ctx, s_set[i + 1:])
            total = total - piece if parity % 2 and i % 2 else total + piece
    return total


# -----------------------------
# Modules and maps
# -----------------------------
@dataclass(frozen=True)
class FreeGradedModule:
    ctx: SuperContext
    basis: tuple[tuple[str, int], ...]
    blocks: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple((str(n), int(d)) for n, d in self.basis))
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise GradedError(f"basis names are not unique: {names}")
        blocks = tuple(self.blocks) or (("M", 0, len(self.basis)),)
        pos = 0
        for label, start, stop in blocks:
            if start != pos or stop < start:
                raise GradedError(f"blocks must tile the basis in order; bad block {label!r} [{start}, {stop})")
            pos = stop
        if pos != len(self.basis):
            raise GradedError(f"blocks cover {pos} of {len(self.basis)} basis elements")
        object.__setattr__(self, "blocks", blocks)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.basis]

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GradedError(f"no basis element {name!r}") from None

    def block_range(self, label: str) -> tuple[int, int]:
        for lab, start, stop in self.blocks:
            if lab == label:
                return start, stop
        raise GradedError(f"no block {label!r}; blocks are {[b[0] for b in self.blocks]}")

    def block_of(self, i: int) -> str:
        for label, start, stop in self.blocks:
            if start <= i < stop:
                return label
        raise GradedError(f"index {i} outside the module")

    def sub(self, label: str) -> "FreeGradedModule":
        start, stop = self.block_range(label)
        return FreeGradedModule(self.ctx, self.basis[start:stop], ((label, 0, stop - start),))

    def shifted(self, k: int) -> "FreeGradedModule":
        """M[k]: an element of degree i in M sits in degree i - k."""
        return FreeGradedModule(
            self.ctx,
            tuple((f"{n}[{k}]", d - k) for n, d in self.basis),
            tuple((f"{lab}[{k}]", s, e) for lab, s, e in self.blocks),
        )

    def dual(self) -> "FreeGradedModule":
        return FreeGradedModule(
            self.ctx,
            tuple((f"{n}^v", -d) for n, d in self.basis),
            tuple((f"{lab}^v", s, e) for lab, s, e in self.blocks),
        )

    @staticmethod
    def direct_sum(*modules: "FreeGradedModule") -> "FreeGradedModule":
        if not modules:
            raise GradedError("direct sum of no modules")
        ctx = modules[0].ctx
        basis: list[tuple[str, int]] = []
        blocks: list[tuple[str, int, int]] = []
        for m in modules:
            if m.ctx != ctx:
                raise GradedError("direct sum of modules over different contexts")
            offset = len(basis)
            basis.extend(m.basis)
            blocks.extend((lab, s + offset, e + offset) for lab, s, e in m.blocks)
        return FreeGradedModule(ctx, tuple(basis), tuple(blocks))


@dataclass(frozen=True, eq=False)
class BlockMap:
    source: FreeGradedModule
    target: FreeGradedModule
    degree: int
    columns: tuple[tuple[SuperFunction, ...], ...]

    def __post_init__(self):
        if self.source.ctx != self.target.ctx:
            raise GradedError("source and target live over different contexts")
        cols = tuple(tuple(col) for col in self.columns)
        if len(cols) != self.source.rank or any(len(col) != self.target.rank for col in cols):
            raise GradedError(
                f"entry matrix shape does not match {self.target.rank}x{self.source.rank}"
            )
        for c, col in enumerate(cols):
            for r, entry in enumerate(col):
                if entry.ctx != self.source.ctx:
                    raise GradedError(f"entry ({r}, {c}) belongs to a different context")
                if entry and entry.degrees() != {self.forced_degree(r, c)}:
                    raise GradedError(
                        f"entry ({self.target.names[r]}, {self.source.names[c]}) = {entry} "
                        f"is not homogeneous of degree {self.forced_degree(r, c)}"
                    )
        object.__setattr__(self, "columns", cols)

    # -----------------------------
    # Constructors
    # -----------------------------
    @classmethod
    def from_entries(
        cls,
        source: FreeGradedModule,
        target: FreeGradedModule,
        degree: int,
        entries: Mapping[tuple[int, int], object],
    ) -> "BlockMap":
        ctx = source.ctx
        cols = [[ctx.zero() for _ in range(target.rank)] for _ in range(source.rank)]
        for (r, c), value in entries.items():
            cols[c][r] = ctx.coerce(value)
        return cls(source, target, degree, tuple(tuple(col) for col in cols))

    @classmethod
    def from_rows(
        cls, source: FreeGradedModule, target: FreeGradedModule, degree: int, rows: Sequence[Sequence[object]]
    ) -> "BlockMap":
        if len(rows) != target.rank or any(len(row) != source.rank for row in rows):
            raise GradedError(f"rows do not form a {target.rank}x{source.rank} matrix")
        return cls.from_entries(
            source, target, degree, {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row)}
        )

    @classmethod
    def zero(cls, source: FreeGradedModule, target: FreeGradedModule, degree: int = 0) -> "BlockMap":
        return cls.from_entries(source, target, degree, {})

    @classmethod
    def identity(cls, module: FreeGradedModule) -> "BlockMap":
        return cls.from_entries(module, module, 0, {(i, i): 1 for i in range(module.rank)})

    @classmethod
    def from_blocks(
        cls,
        source: FreeGradedModule,
        target: FreeGradedModule,
        degree: int,
        blocks: Mapping[tuple[str, str], "BlockMap"],
    ) -> "BlockMap":
        """Assemble from (row label, column label) blocks, copying entries by position."""
        entries: dict[tuple[int, int], SuperFunction] = {}
        for (row_label, col_label), blk in blocks.items():
            r0, r1 = target.block_range(row_label)
            c0, c1 = source.block_range(col_label)
            if blk.target.rank != r1 - r0 or blk.source.rank != c1 - c0:
                raise GradedError(f"block ({row_label}, {col_label}) has the wrong shape")
            for c, col in enumerate(blk.columns):
                for r, entry in enumerate(col):
                    if entry:
                        entries[(r0 + r, c0 + c)] = entry
        return cls.from_entries(source, target, degree, entries)

    # -----------------------------
    # Queries
    # -----------------------------
    @property
    def ctx(self) -> SuperContext:
        return self.source.ctx

    def forced_degree(self, r: int, c: int) -> int:
        return self.source.degree(c) + self.degree - self.target.degree(r)

    def entry(self, r: int, c: int) -> SuperFunction:
        return self.columns[c][r]

    def rows(self) -> list[list[SuperFunction]]:
        return [[self.columns[c][r] for c in range(self.source.rank)] for r in range(self.target.rank)]

    def is_zero(self) -> bool:
        return all(e.is_zero() for col in self.columns for e in col)

    def first_nonzero(self) -> tuple[int, int, SuperFunction] | None:
        for r in range(self.target.rank):
            for c in range(self.source.rank):
                if self.columns[c][r]:
                    return r, c, self.columns[c][r]
        return None

    def describe_entry(self, r: int, c: int) -> str:
        return (
            f"entry ({self.target.names[r]}, {self.source.names[c]}) in block "
            f"({self.target.block_of(r)}, {self.source.block_of(c)})"
        )

    def witness(self) -> str | None:
        hit = self.first_nonzero()
        if hit is None:
            return None
        r, c, value = hit
        return f"{self.describe_entry(r, c)}: {value}"

    def block(self, row_label: str, col_label: str) -> "BlockMap":
        r0, r1 = self.target.block_range(row_label)
        c0, c1 = self.source.block_range(col_label)
        return BlockMap(
            self.source.sub(col_label),
            self.target.sub(row_label),
            self.degree,
            tuple(tuple(self.columns[c][r0:r1]) for c in range(c0, c1)),
        )

    def same_entries(self, other: "BlockMap") -> bool:
        return self.columns == other.columns

    # -----------------------------
    # Arithmetic
    # -----------------------------
    def _check_parallel(self, other: "BlockMap") -> None:
        if self.source != other.source or self.target != other.target or self.degree != other.degree:
            raise GradedError("block maps are not parallel (source/target/degree differ)")

    def map_entries(self, fn: Callable[[int, int, SuperFunction], SuperFunction]) -> "BlockMap":
        cols = tuple(
            tuple(fn(r, c, e) for r, e in enumerate(col)) for c, col in enumerate(self.columns)
        )
        return BlockMap(self.source, self.target, self.degree, cols)

    def __add__(self, other: "BlockMap") -> "BlockMap":
        self._check_parallel(other)
        return self.map_entries(lambda r, c, e: e + other.columns[c][r])

    def __sub__(self, other: "BlockMap") -> "BlockMap":
        self._check_parallel(other)
        return self.map_entries(lambda r, c, e: e - other.columns[c][r])

    def __neg__(self) -> "BlockMap":
        return self.map_entries(lambda r, c, e: -e)

    def scale(self, factor: object) -> "BlockMap":
        return self.map_entries(lambda r, c, e: e.scale(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BlockMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.columns == other.columns
        )

    __hash__ = None

    def apply_delta(self) -> "BlockMap":
        """Entrywise Koszul differential (degree goes up by one)."""
        ctx = self.ctx
        cols = tuple(tuple(ctx.delta(e) for e in col) for col in self.columns)
        return BlockMap(self.source, self.target, self.degree + 1, cols)

    def apply_coefficient_derivation(self, fn: Callable[[SuperFunction], SuperFunction]) -> "BlockMap":
        """Entrywise even derivation of the coefficients (degree unchanged)."""
        return self.map_entries(lambda r, c, e: fn(e))

    def shift_entries(self) -> "BlockMap":
        """Entries of the same map after suspending source and target once."""
        return self.map_entries(lambda r, c, e: e if self.forced_degree(r, c) % 2 else -e)

    def fiber_matrix(self, point: Sequence[object]) -> Matrix:
        """Matrix on the fibers span{E_S e_c} at a point."""
        src = fiber_basis(self.source)
        tgt_index = {(s, r): i for i, (s, r, _) in enumerate(fiber_basis(self.target))}
        ctx = self.ctx
        out = zeros(len(tgt_index), len(src))
        for col, (s_set, c, _) in enumerate(src):
            sign = -1 if (self.degree * len(s_set)) % 2 else 1
            left = SuperFunction.monomial(ctx, s_set)
            for r in range(self.target.rank):
                entry = self.columns[c][r]
                if not entry:
                    continue
                for t_set, value in (left * entry).evaluate(point).items():
                    out[tgt_index[(t_set, r)]][col] += sign * value
        return out


def fiber_basis(module: FreeGradedModule) -> list[tuple[Subset, int, int]]:
    """(S, c, degree) for the fiber basis E_S e_c, grouped by basis element."""
    subsets = sorted(all_subsets(module.ctx.dim), key=_subset_key)
    return [(s, c, module.degree(c) - len(s)) for c in range(module.rank) for s in subsets]


def compose(g: BlockMap, f: BlockMap) -> BlockMap:
    """g o f with the Koszul sign (-1)^{|g| |f_rc|}."""
    if f.target != g.source:
        raise GradedError(
            f"cannot compose: target of f {f.target.names} differs from source of g {g.source.names}"
        )
    ctx = f.ctx
    cols = []
    for c in range(f.source.rank):
        col = []
        for r2 in range(g.target.rank):
            acc = ctx.zero()
            for r in range(f.target.rank):
                fe = f.columns[c][r]
                ge = g.columns[r][r2]
                if not fe or not ge:
                    continue
                term = fe * ge
                if (g.degree * f.forced_degree(r, c)) % 2:
                    term = -term
                acc = acc + term
            col.append(acc)
        cols.append(tuple(col))
    return BlockMap(f.source, g.target, f.degree + g.degree, tuple(cols))


def koszul_transpose(
    f: BlockMap,
    dual_source: FreeGradedModule,
    dual_target: FreeGradedModule,
    source_pairing: Sequence[int],
    target_pairing: Sequence[int],
) -> BlockMap:
    """The dual map f^v: (f.target)^v -> (f.source)^v.

    ``source_pairing[s]`` is the index in f.target dual to basis element s of
    ``dual_source``; ``target_pairing[t]`` the index in f.source dual to t.
    Entry (c^v, r^v) is (-1)^{deg_c |f_rc|} f_rc.
    """
    if len(source_pairing) != dual_source.rank or len(target_pairing) != dual_target.rank:
        raise GradedError("pairings must cover the dual modules")
    for s, r in enumerate(source_pairing):
        if dual_source.degree(s) != -f.target.degree(r):
            raise GradedError(f"{dual_source.names[s]} is not dual to {f.target.names[r]}")
    for t, c in enumerate(target_pairing):
        if dual_target.degree(t) != -f.source.degree(c):
            raise GradedError(f"{dual_target.names[t]} is not dual to {f.source.names[c]}")
    entries = {}
    for s, r in enumerate(source_pairing):
        for t, c in enumerate(target_pairing):
            e = f.entry(r, c)
            if e:
                odd = (f.source.degree(c) * f.forced_degree(r, c)) % 2
                entries[(t, s)] = -e if odd else e
    return BlockMap.from_entries(dual_source, dual_target, f.degree, entries)


# -----------------------------
# dg-modules
# -----------------------------
def square_residual(structure: BlockMap) -> BlockMap:
    """delta(D) + D o D, the matrix of d o d."""
    return structure.apply_delta() + compose(structure, structure)


@dataclass(frozen=True, eq=False)
class DgModule:
    module: FreeGradedModule
    structure: BlockMap
    convention: str = SHIFT_CONVENTION

    def __post_init__(self):
        if self.structure.source != self.module or self.structure.target != self.module:
            raise GradedError("structure map must be an endomorphism of the module")
        if self.structure.degree != 1:
            raise GradedError(f"structure map must have degree +1, got {self.structure.degree}")
        residual = square_residual(self.structure)
        if not residual.is_zero():
            raise SquareZeroError(f"differential does not square to zero: {residual.witness()}", residual.witness())

    @classmethod
    def trivial(cls, module: FreeGradedModule) -> "DgModule":
        return cls(module, BlockMap.zero(module, module, 1))

    @property
    def ctx(self) -> SuperContext:
        return self.module.ctx

    @property
    def differential(self) -> BlockMap:
        return self.structure


def shift_dg(dg: DgModule, k: int) -> DgModule:
    module = dg.module.shifted(k)
    structure = dg.structure.shift_entries() if k % 2 else dg.structure
    return DgModule(module, BlockMap(module, module, 1, structure.columns), dg.convention)


@dataclass
class ChainMapReport:
    ok: bool
    witness: str | None
    residual: BlockMap


def verify_chain_map(f: BlockMap, src: DgModule, tgt: DgModule) -> ChainMapReport:
    if f.source != src.module or f.target != tgt.module:
        raise GradedError(
            f"shape mismatch: map {f.target.rank}x{f.source.rank} between "
            f"modules of rank {src.module.rank} and {tgt.module.rank}"
        )
    forward = compose(tgt.structure, f)
    backward = compose(f, src.structure)
    residual = f.apply_delta() + forward - backward if f.degree % 2 == 0 else f.apply_delta() + forward + backward
    witness = residual.witness()
    if witness:
        logger.debug(f"Chain map check failed: {witness}")
    return ChainMapReport(witness is None, witness, residual)


def total_complex(outer: BlockMap, source: DgModule, target: DgModule, source_degree: int = -1) -> DgModule:
    """Total complex of a two-term complex A -> B with A in outer degree -1 or 0.

    -1 gives A[1] + B with blocks [[shift D_A, 0], [g, D_B]];
     0 gives A + B[-1] with blocks [[D_A, 0], [(-1)^|g| g, shift D_B]].
    """
    if outer.degree != 0:
        raise GradedError(f"outer map must have degree 0, got {outer.degree}")
    if outer.source != source.module or outer.target != target.module:
        raise GradedError("outer map does not run between the given dg-modules")

    a, b = source.module, target.module
    if source_degree == -1:
        a_tot, b_tot = a.shifted(1), b
        d_a, d_b = source.structure.shift_entries(), target.structure
        link = outer
    elif source_degree == 0:
        a_tot, b_tot = a, b.shifted(-1)
        d_a, d_b = source.structure, target.structure.shift_entries()
        link = outer.map_entries(lambda r, c, e: -e if outer.forced_degree(r, c) % 2 else e)
    else:
        raise GradedError(f"source_degree must be -1 or 0, got {source_degree}")

    module = FreeGradedModule.direct_sum(a_tot, b_tot)
    structure = _assemble_two_by_two(module, a_tot, b_tot, d_a, link, d_b)
    residual = square_residual(structure)
    witness = residual.witness()
    if witness:
        raise SquareZeroError(f"total complex differential does not square to zero: {witness}", witness)
    logger.debug(f"Total complex on {module.rank} generators assembled")
    return DgModule(module, structure)


def _assemble_two_by_two(
    module: FreeGradedModule,
    a_tot: FreeGradedModule,
    b_tot: FreeGradedModule,
    d_a: BlockMap,
    link: BlockMap,
    d_b: BlockMap,
) -> BlockMap:
    off = a_tot.rank
    entries: dict[tuple[int, int], SuperFunction] = {}
    for c in range(a_tot.rank):
        for r in range(a_tot.rank):
            if d_a.entry(r, c):
                entries[(r, c)] = d_a.entry(r, c)
        for r in range(b_tot.rank):
            if link.entry(r, c):
                entries[(off + r, c)] = link.entry(r, c)
    for c in range(b_tot.rank):
        for r in range(b_tot.rank):
            if d_b.entry(r, c):
                entries[(off + r, off + c)] = d_b.entry(r, c)
    return BlockMap.from_entries(module, module, 1, entries)


def cone(f: BlockMap, src: DgModule, tgt: DgModule) -> DgModule:
    report = verify_chain_map(f, src, tgt)
    if not report.ok:
        raise ChainMapError(f"cone of a map that is not a chain map: {report.witness}", report.witness)
    return total_complex(f, src, tgt, source_degree=-1)


def cocone(f: BlockMap, src: DgModule, tgt: DgModule) -> DgModule:
    report = verify_chain_map(f, src, tgt)
    if not report.ok:
        raise ChainMapError(f"cocone of a map that is not a chain map: {report.witness}", report.witness)
    return total_complex(f, src, tgt, source_degree=0)


def dual_module(dg: DgModule, order: Sequence[int] | None = None) -> DgModule:
    """Koszul dual dg-module; ``order`` lists which original basis index sits at each dual position."""
    m = dg.module
    order = list(range(m.rank)) if order is None else list(order)
    if sorted(order) != list(range(m.rank)):
        raise GradedError(f"order {order} is not a permutation of the basis")
    dual = m.dual()
    basis = tuple(dual.basis[i] for i in order)
    module = FreeGradedModule(m.ctx, basis)
    position = {orig: pos for pos, orig in enumerate(order)}
    entries = {}
    for c in range(m.rank):
        for r in range(m.rank):
            e = dg.structure.entry(r, c)
            if not e:
                continue
            # D^v_{c r} = -(-1)^{deg_c (1 + |D_rc|)} D_rc
            odd = (m.degree(c) * (1 + dg.structure.forced_degree(r, c))) % 2
            entries[(position[c], position[r])] = e if odd else -e
    return DgModule(module, BlockMap.from_entries(module, module, 1, entries))


# -----------------------------
# Inverses and pointwise cohomology
# -----------------------------
def constant_matrix(f: BlockMap) -> Matrix:
    """Rational matrix of a map whose entries are all constants."""
    out = zeros(f.target.rank, f.source.rank)
    for c, col in enumerate(f.columns):
        for r, e in enumerate(col):
            if not e:
                continue
            p = e.polynomial_part()
            if len(e.terms()) != 1 or not p.is_constant():
                raise GradedError(f"{f.describe_entry(r, c)} is not a constant: {e}")
            out[r][c] = p.constant_term()
    return out


def invert_block_triangular(f: BlockMap) -> BlockMap:
    """Two-sided inverse of a degree-0 block lower-triangular map with constant diagonal blocks."""
    if f.degree != 0:
        raise GradedError("only degree-0 maps can be inverted")
    src_labels = [b[0] for b in f.source.blocks]
    tgt_labels = [b[0] for b in f.target.blocks]
    if len(src_labels) != len(tgt_labels):
        raise GradedError("source and target have different block structures")

    n = len(src_labels)
    for i in range(n):
        for j in range(i + 1, n):
            if not f.block(tgt_labels[i], src_labels[j]).is_zero():
                raise GradedError(f"block ({tgt_labels[i]}, {src_labels[j]}) above the diagonal is nonzero")

    inv: dict[tuple[int, int], BlockMap] = {}
    for i in range(n):
        diag = f.block(tgt_labels[i], src_labels[i])
        inv_rows = inverse(constant_matrix(diag))
        inv[(i, i)] = BlockMap.from_rows(f.target.sub(tgt_labels[i]), f.source.sub(src_labels[i]), 0, inv_rows)
    for j in range(n):
        for i in range(j + 1, n):
            acc = BlockMap.zero(f.target.sub(tgt_labels[j]), f.target.sub(tgt_labels[i]), 0)
            for k in range(j, i):
                acc = acc + compose(f.block(tgt_labels[i], src_labels[k]), inv[(k, j)])
            inv[(i, j)] = -compose(inv[(i, i)], acc)

    blocks = {(src_labels[i], tgt_labels[j]): blk for (i, j), blk in inv.items()}
    return BlockMap.from_blocks(f.target, f.source, 0, blocks)


def delta_fiber_matrix(module: FreeGradedModule, point: Sequence[object]) -> Matrix:
    """Matrix of E_S e_c -> delta(E_S)(m) e_c on the fiber."""
    basis = fiber_basis(module)
    index = {(s, c): i for i, (s, c, _) in enumerate(basis)}
    out = zeros(len(basis), len(basis))
    ctx = module.ctx
    for col, (s_set, c, _) in enumerate(basis):
        image = ctx.delta(SuperFunction.monomial(ctx, s_set))
        for t_set, value in image.evaluate(point).items():
            out[index[(t_set, c)]][col] += value
    return out


def pointwise_cohomology(dg: DgModule, point: Sequence[object]) -> dict[int, int]:
    """Cohomology dimensions of the fiber complex at a rational point."""
    point = [as_rational(v) for v in point]
    if len(point) != dg.ctx.nvars:
        raise GradedError(f"point has {len(point)} coordinates, expected {dg.ctx.nvars}")
    basis = fiber_basis(dg.module)
    full = delta_fiber_matrix(dg.module, point)
    structure = dg.structure.fiber_matrix(point)
    full = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(full, structure)]
    if basis and first_nonzero(mat_mul(full, full)) is not None:
        raise InternalConsistencyError("evaluated differential does not square to zero")

    by_degree: dict[int, list[int]] = {}
    for i, (_, _, deg) in enumerate(basis):
        by_degree.setdefault(deg, []).append(i)

    def rank_between(k: int) -> int:
        cols = by_degree.get(k, [])
        rows = by_degree.get(k + 1, [])
        if not cols or not rows:
            return 0
        return bareiss_rank([[full[r][c] for c in cols] for r in rows])

    dims = {}
    for k in sorted(by_degree):
        dims[k] = len(by_degree[k]) - rank_between(k) - rank_between(k - 1)
    logger.debug(f"Pointwise cohomology at {point}: {dims}")
    return dims
