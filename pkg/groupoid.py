# groupoid.py
"""
Nerve of the action groupoid G x M => M, realised numerically.

An n-simplex is (g_1, ..., g_n, x) with N_n = G^n x M. Face maps:
  d_0 drops g_1, d_n acts with g_n on x, d_i (0<i<n) multiplies g_i g_{i+1}.
With this numbering d_0 is the source map and d_1 the target map on N_1.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Simplex:
    arrows: tuple[np.ndarray, ...]
    point: np.ndarray

    @property
    def level(self) -> int:
        return len(self.arrows)


def face(i: int, simplex: Simplex) -> Simplex:
    n = simplex.level
    if n == 0:
        raise ValueError("0-simplices have no faces")
    if not 0 <= i <= n:
        raise ValueError(f"face index {i} out of range 0..{n}")
    arrows = simplex.arrows
    if i == 0:
        return Simplex(arrows[1:], simplex.point)
    if i == n:
        return Simplex(arrows[:-1], arrows[-1] @ simplex.point)
    merged = arrows[i - 1] @ arrows[i]
    return Simplex(arrows[: i - 1] + (merged,) + arrows[i + 1:], simplex.point)


def simplex_distance(a: Simplex, b: Simplex) -> float:
    if a.level != b.level:
        return float("inf")
    parts = [float(np.max(np.abs(a.point - b.point))) if a.point.size else 0.0]
    parts += [float(np.max(np.abs(x - y))) if x.size else 0.0 for x, y in zip(a.arrows, b.arrows)]
    return max(parts)


def simplicial_identity_residual(simplex: Simplex) -> float:
    """max over i < j of |d_i d_j - d_{j-1} d_i| on one simplex."""
    n = simplex.level
    worst = 0.0
    for j in range(1, n + 1):
        for i in range(j):
            lhs = face(i, face(j, simplex))
            rhs = face(j - 1, face(i, simplex))
            worst = max(worst, simplex_distance(lhs, rhs))
    return worst


Cochain = Callable[[Simplex], float]


def cochain_differential(f: Cochain, level: int) -> Cochain:
    """(df)(s) = sum_i (-1)^i f(d_i s) for s in N_{level+1}."""

    def df(simplex: Simplex) -> float:
        if simplex.level != level + 1:
            raise ValueError(f"expected a {level + 1}-simplex, got level {simplex.level}")
        return sum((-1) ** i * f(face(i, simplex)) for i in range(level + 2))

    return df


def random_simplices(arrows: Sequence[np.ndarray], points: Sequence[np.ndarray], level: int) -> list[Simplex]:
    """Chop sampled group elements into consecutive tuples of length ``level``."""
    out = []
    for k, point in enumerate(points):
        chosen = tuple(arrows[(k * level + t) % len(arrows)] for t in range(level))
        out.append(Simplex(chosen, point))
    return out
