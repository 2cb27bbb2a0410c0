# liealg.py
"""
Lie algebras given by structure constants, with an optional matrix
representation used for the sampled group-level checks.

Conventions: [E_i, E_j] = sum_k c^k_{ij} E_k, stored densely as c[k][i][j].
Indices are 0-based in code and 1-based in witnesses and config files.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from exactlinalg import Matrix, as_matrix, mat_mul, mat_sub, to_float, transpose, zeros
from exactpoly import as_rational
from settings import settings

logger = logging.getLogger(__name__)

GROUP_TAGS = ("orthogonal", "unitary-real-form", "abelian")

# sign s in coad_X = s * (ad_X)^T
COADJOINT_CONVENTIONS = {"minus_transpose": -1, "plus_transpose": 1}
DEFAULT_COADJOINT = "minus_transpose"


class LieAlgebraError(ValueError):
    pass


class ExponentialError(LieAlgebraError):
    pass


@dataclass(frozen=True)
class LieAlgebraData:
    dim: int
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    rep: tuple[tuple[tuple[Fraction, ...], ...], ...] | None = None
    group_tag: str | None = None
    rep_dim: int = 0

    def __post_init__(self):
        if self.dim < 0:
            raise LieAlgebraError(f"dimension must be non-negative, got {self.dim}")
        c = self.structure_constants
        if len(c) != self.dim or any(len(ck) != self.dim or any(len(row) != self.dim for row in ck) for ck in c):
            raise LieAlgebraError(f"structure constants must be a {self.dim}x{self.dim}x{self.dim} array")
        if self.group_tag is not None and self.group_tag not in GROUP_TAGS:
            raise LieAlgebraError(f"unknown group_tag {self.group_tag!r}; expected one of {list(GROUP_TAGS)}")
        if self.rep is not None:
            if len(self.rep) != self.dim:
                raise LieAlgebraError(f"rep has {len(self.rep)} matrices, expected {self.dim}")
            for i, a in enumerate(self.rep):
                if len(a) != self.rep_dim or any(len(row) != self.rep_dim for row in a):
                    raise LieAlgebraError(f"rep matrix {i + 1} is not {self.rep_dim}x{self.rep_dim}")

    @classmethod
    def from_sparse(
        cls,
        dim: int,
        entries: Iterable[Sequence[object]],
        rep: Sequence[Sequence[Sequence[object]]] | None = None,
        group_tag: str | None = None,
        rep_dim: int | None = None,
    ) -> "LieAlgebraData":
        """Build from 1-indexed ``(k, i, j, c)`` rows; rows are taken literally."""
        dense = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for row in entries:
            if len(row) != 4:
                raise LieAlgebraError(f"structure constant entry {list(row)} must be (k, i, j, value)")
            k, i, j = (int(v) for v in row[:3])
            if not all(1 <= v <= dim for v in (k, i, j)):
                raise LieAlgebraError(f"structure constant index ({k}, {i}, {j}) out of range 1..{dim}")
            dense[k - 1][i - 1][j - 1] += as_rational(row[3])
        frozen_c = tuple(tuple(tuple(r) for r in ck) for ck in dense)

        frozen_rep = None
        if rep is not None:
            frozen_rep = tuple(tuple(tuple(r) for r in as_matrix(a)) for a in rep)
            if frozen_rep:
                rep_dim = len(frozen_rep[0])
        return cls(dim, frozen_c, frozen_rep, group_tag, rep_dim or 0)

    @property
    def is_abelian(self) -> bool:
        return not any(v for ck in self.structure_constants for row in ck for v in row)

    def constant(self, k: int, i: int, j: int) -> Fraction:
        return self.structure_constants[k][i][j]

    def basis_vector(self, i: int) -> list[Fraction]:
        return [Fraction(int(i == j)) for j in range(self.dim)]

    def bracket(self, x: Sequence[object], y: Sequence[object]) -> list[Fraction]:
        x = _vector(x, self.dim)
        y = _vector(y, self.dim)
        c = self.structure_constants
        return [
            sum((x[i] * y[j] * c[k][i][j] for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]), Fraction(0))
            for k in range(self.dim)
        ]

    def rep_matrix(self, x: Sequence[object]) -> Matrix:
        if self.rep is None:
            raise LieAlgebraError("this Lie algebra carries no representation")
        x = _vector(x, self.dim)
        out = zeros(self.rep_dim, self.rep_dim)
        for xi, a in zip(x, self.rep):
            if xi:
                for r in range(self.rep_dim):
                    for s in range(self.rep_dim):
                        out[r][s] += xi * a[r][s]
        return out

    def sparse_entries(self) -> list[tuple[int, int, int, Fraction]]:
        return [
            (k + 1, i + 1, j + 1, self.structure_constants[k][i][j])
            for k in range(self.dim)
            for i in range(self.dim)
            for j in range(self.dim)
            if self.structure_constants[k][i][j]
        ]


def _vector(x: Sequence[object], dim: int) -> list[Fraction]:
    if len(x) != dim:
        raise LieAlgebraError(f"vector has length {len(x)}, expected {dim}")
    return [as_rational(v) for v in x]


# -----------------------------
# Exact axioms
# -----------------------------
@dataclass
class LieAxiomReport:
    antisymmetry_ok: bool
    jacobi_ok: bool
    rep_ok: bool | None  # None when no representation is attached
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.antisymmetry_ok and self.jacobi_ok and self.rep_ok is not False


def check_lie_axioms(lie: LieAlgebraData) -> LieAxiomReport:
    d = lie.dim
    c = lie.structure_constants
    witnesses: dict[str, tuple] = {}

    antisymmetry_ok = True
    for k in range(d):
        for i in range(d):
            for j in range(i, d):
                residual = c[k][i][j] + c[k][j][i]
                if residual and antisymmetry_ok:
                    antisymmetry_ok = False
                    witnesses["antisymmetry"] = ((k + 1, i + 1, j + 1), residual)

    jacobi_ok = True
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    residual = sum(
                        (c[m][i][j] * c[l][m][k] + c[m][j][k] * c[l][m][i] + c[m][k][i] * c[l][m][j] for m in range(d)),
                        Fraction(0),
                    )
                    if residual and jacobi_ok:
                        jacobi_ok = False
                        witnesses["jacobi"] = ((i + 1, j + 1, k + 1, l + 1), residual)

    rep_ok = None
    if lie.rep is not None:
        rep_ok = True
        reps = [[list(r) for r in a] for a in lie.rep]
        for i in range(d):
            for j in range(d):
                commutator = mat_sub(mat_mul(reps[i], reps[j]), mat_mul(reps[j], reps[i]))
                expected = lie.rep_matrix([c[k][i][j] for k in range(d)])
                diff = mat_sub(commutator, expected)
                for r, row in enumerate(diff):
                    for s, v in enumerate(row):
                        if v and rep_ok:
                            rep_ok = False
                            witnesses["rep"] = ((i + 1, j + 1, r + 1, s + 1), v)

    report = LieAxiomReport(antisymmetry_ok, jacobi_ok, rep_ok, witnesses)
    if not report.ok:
        logger.warning(f"Lie algebra axioms failed: {witnesses}")
    return report


def ad_operator(lie: LieAlgebraData, x: Sequence[object]) -> Matrix:
    """(ad_X)[k][j] = sum_i X^i c^k_{ij}."""
    x = _vector(x, lie.dim)
    c = lie.structure_constants
    return [
        [sum((x[i] * c[k][i][j] for i in range(lie.dim) if x[i]), Fraction(0)) for j in range(lie.dim)]
        for k in range(lie.dim)
    ]


def coad_operator(lie: LieAlgebraData, x: Sequence[object], convention: str = DEFAULT_COADJOINT) -> Matrix:
    """Matrix of ad*_X on the dual basis; default <ad*_X s, Y> = -<s, [X, Y]>."""
    try:
        sign = COADJOINT_CONVENTIONS[convention]
    except KeyError:
        raise LieAlgebraError(f"unknown coadjoint convention {convention!r}") from None
    ad = ad_operator(lie, x)
    return [[sign * v for v in row] for row in transpose(ad, lie.dim)]


# -----------------------------
# Numeric group elements
# -----------------------------
@dataclass(frozen=True, eq=False)
class NumericGroupElement:
    matrix: np.ndarray
    inverse: np.ndarray
    algebra_vector: tuple[float, ...]
    scale: float = 1.0

    def inverted(self) -> "NumericGroupElement":
        return NumericGroupElement(self.inverse, self.matrix, tuple(-v for v in self.algebra_vector), self.scale)

    def act(self, point: np.ndarray) -> np.ndarray:
        return self.matrix @ point


def expm(matrix: np.ndarray, term_tol: float | None = None) -> np.ndarray:
    """Scaling-and-squaring exponential with an adaptive Taylor series."""
    term_tol = settings.EXP_TERM_TOL if term_tol is None else term_tol
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    norm = float(np.linalg.norm(a, ord=np.inf))
    squarings = int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0
    scaled = a / 2.0**squarings

    result = np.identity(n)
    term = np.identity(n)
    for k in range(1, 64):
        term = term @ scaled / k
        result = result + term
        if np.linalg.norm(term, ord=np.inf) < term_tol:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def exponential_residual(matrix: np.ndarray) -> float:
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(expm(a) @ expm(-a) - np.identity(a.shape[0]))))


def exponentiate(lie: LieAlgebraData, x: Sequence[float], scale: float = 1.0) -> NumericGroupElement:
    if lie.rep is None:
        raise LieAlgebraError("sampling group elements needs a representation")
    n = lie.rep_dim
    generator = np.zeros((n, n))
    for xi, a in zip(x, lie.rep):
        generator = generator + scale * float(xi) * to_float(a, n)

    residual = exponential_residual(generator)
    if residual > settings.EXP_RESIDUAL_TOL:
        raise ExponentialError(f"exponential residual {residual:.3e} exceeds {settings.EXP_RESIDUAL_TOL:.1e}")
    g = expm(generator)
    g_inv = expm(-generator)

    if lie.group_tag in ("orthogonal", "unitary-real-form"):
        # polar factor: nearest orthogonal matrix
        u, _, vt = np.linalg.svd(g)
        g = u @ vt
        g_inv = g.T
        ortho = float(np.max(np.abs(g.T @ g - np.identity(n)))) if n else 0.0
        if ortho > settings.ORTHO_TOL:
            raise ExponentialError(f"orthogonality residual {ortho:.3e} exceeds {settings.ORTHO_TOL:.1e}")
    return NumericGroupElement(g, g_inv, tuple(float(v) for v in x), float(scale))


def sample_algebra_vectors(lie: LieAlgebraData, seed: int, count: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    return rng.uniform(-1.0, 1.0, size=(count, lie.dim))


def sample_group(lie: LieAlgebraData, seed: int, count: int, scale: float = 1.0) -> list[NumericGroupElement]:
    if lie.rep is None:
        raise LieAlgebraError("sample_group needs a representation (rep)")
    if lie.group_tag is None:
        raise LieAlgebraError("sample_group needs a group_tag")
    vectors = sample_algebra_vectors(lie, seed, count)
    logger.debug(f"Sampling {count} group elements (seed={seed}, tag={lie.group_tag})")
    return [exponentiate(lie, v, scale) for v in vectors]


def rep_matrix_float(lie: LieAlgebraData, x: Sequence[float]) -> np.ndarray:
    n = lie.rep_dim
    out = np.zeros((n, n))
    for xi, a in zip(x, lie.rep or ()):
        out = out + float(xi) * to_float(a, n)
    return out


def ad_matrix_float(lie: LieAlgebraData, x: Sequence[float]) -> np.ndarray:
    d = lie.dim
    c = np.array([[[float(v) for v in row] for row in ck] for ck in lie.structure_constants]).reshape(d, d, d)
    # (ad_X)[k][j] = sum_i X^i c[k][i][j]
    return np.einsum("i,kij->kj", np.asarray(x, dtype=float), c) if d else np.zeros((0, 0))


def adjoint_by_series(lie: LieAlgebraData, x: Sequence[float], scale: float = 1.0) -> np.ndarray:
    """Ad_{exp(scale X)} = exp(scale ad_X) in the adjoint representation."""
    if lie.is_abelian:
        return np.identity(lie.dim)
    return expm(scale * ad_matrix_float(lie, x))


def adjoint_by_conjugation(lie: LieAlgebraData, g: NumericGroupElement) -> np.ndarray:
    """Ad_g from g A_i g^-1 expressed back in the basis A_k (least squares)."""
    d = lie.dim
    if lie.is_abelian:
        return np.identity(d)
    n = lie.rep_dim
    basis = np.column_stack([to_float(a, n).reshape(-1) for a in lie.rep])
    out = np.zeros((d, d))
    for i, a in enumerate(lie.rep):
        conj = g.matrix @ to_float(a, n) @ g.inverse
        coords, *_ = np.linalg.lstsq(basis, conj.reshape(-1), rcond=None)
        out[:, i] = coords
    return out


def coadjoint_matrix(ad_of_inverse: np.ndarray) -> np.ndarray:
    """Ad*_g = (Ad_{g^-1})^T on the dual basis."""
    return ad_of_inverse.T
