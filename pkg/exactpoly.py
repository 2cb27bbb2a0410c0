# exactpoly.py
"""
Exact multivariate polynomials over the rationals.

Polynomials are immutable. Terms are kept in graded-lexicographic order
(leading term first) with no zero coefficients, so two polynomials are equal
exactly when their term tuples are equal.

The string grammar used in config files is the one produced by ``str(p)``:
terms joined by ``+``/``-``, monomials written ``coef*x1^2*x2`` with rational
coefficients ``a/b``.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Literal, Mapping, Sequence

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class PolynomialError(ValueError):
    """Structural problem with a polynomial (variables, shapes, grammar)."""


def as_rational(value: object) -> Fraction:
    """Coerce ints, strings, Fractions and sympy rationals to ``Fraction``.

    Floats are refused: an exact toolkit must not silently round.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise PolynomialError(f"boolean {value!r} is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PolynomialError(f"cannot read {value!r} as a rational number") from exc
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        raise PolynomialError(f"float {value!r} is not exact; write it as a string like '1/3'")
    raise PolynomialError(f"unsupported coefficient type {type(value).__name__}")


def _grlex_key(item: tuple[Monomial, Fraction]) -> tuple[int, Monomial]:
    mono = item[0]
    return sum(mono), mono


class Polynomial:
    __slots__ = ("_variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], object] | None = None):
        variables = tuple(str(v) for v in variables)
        if len(set(variables)) != len(variables):
            raise PolynomialError(f"duplicate variable names in {list(variables)}")
        cleaned: dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(variables):
                raise PolynomialError(
                    f"exponent vector {mono} has length {len(mono)}, expected {len(variables)}"
                )
            if any(e < 0 for e in mono):
                raise PolynomialError(f"negative exponent in {mono}")
            c = as_rational(coef)
            if c:
                cleaned[mono] = cleaned.get(mono, Fraction(0)) + c
        self._variables = variables
        self._terms = _canonical(cleaned)

    @classmethod
    def _raw(cls, variables: tuple[str, ...], cleaned: dict[Monomial, Fraction]) -> "Polynomial":
        obj = object.__new__(cls)
        obj._variables = variables
        obj._terms = _canonical(cleaned)
        return obj

    # -----------------------------
    # Constructors
    # -----------------------------
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, value: object, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): as_rational(value)})

    @classmethod
    def variable(cls, name: str | int, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        idx = _index_of(name, variables)
        mono = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls._raw(variables, {mono: Fraction(1)})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        """Parse the config grammar, e.g. ``"1/2*x^2 + 1/2*y^2 - 1/2"``."""
        variables = tuple(variables)
        symbols = [sympy.Symbol(v) for v in variables]
        try:
            expr = parse_expr(
                text,
                local_dict=dict(zip(variables, symbols)),
                transformations=_TRANSFORMATIONS,
                evaluate=True,
            )
        except Exception as exc:  # sympy raises SyntaxError, TokenError, TypeError...
            raise PolynomialError(f"cannot parse polynomial {text!r}: {exc}") from exc

        if not isinstance(expr, sympy.Expr):
            raise PolynomialError(f"{text!r} is not an expression")
        if expr.atoms(sympy.Float):
            raise PolynomialError(f"{text!r} contains a decimal literal; use a/b rationals")
        unknown = expr.free_symbols - set(symbols)
        if unknown:
            names = sorted(str(s) for s in unknown)
            raise PolynomialError(f"{text!r} uses unknown variables {names}; known: {list(variables)}")
        try:
            poly = sympy.Poly(expr, *symbols, domain="QQ") if symbols else None
        except Exception as exc:  # PolynomialError, CoercionFailed for non-polynomial input
            raise PolynomialError(f"{text!r} is not a polynomial in {list(variables)}") from exc

        if poly is None:
            # no variables at all: the expression must be a rational constant
            if not expr.is_Rational:
                raise PolynomialError(f"{text!r} is not a rational constant")
            return cls.constant(expr, variables)
        terms = {mono: as_rational(sympy.Rational(coef)) for mono, coef in poly.terms()}
        return cls._raw(variables, terms)

    # -----------------------------
    # Queries
    # -----------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def nvars(self) -> int:
        return len(self._variables)

    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m, _ in self._terms)

    def constant_term(self) -> Fraction:
        for mono, coef in self._terms:
            if not any(mono):
                return coef
        return Fraction(0)

    def total_degree(self) -> int:
        """Degree of the leading term; -1 for the zero polynomial."""
        return sum(self._terms[0][0]) if self._terms else -1

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        mono = tuple(mono)
        for m, c in self._terms:
            if m == mono:
                return c
        return Fraction(0)

    # -----------------------------
    # Arithmetic
    # -----------------------------
    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-home a polynomial onto another variable list (constants only, or same list)."""
        variables = tuple(variables)
        if variables == self._variables:
            return self
        if not self.is_constant():
            raise PolynomialError(
                f"cannot move non-constant polynomial from {list(self._variables)} to {list(variables)}"
            )
        return Polynomial.constant(self.constant_term(), variables)

    def _align(self, other: object) -> tuple["Polynomial", "Polynomial"]:
        if not isinstance(other, Polynomial):
            return self, Polynomial.constant(as_rational(other), self._variables)
        if other._variables == self._variables:
            return self, other
        if other.is_constant():
            return self, other.with_variables(self._variables)
        if self.is_constant():
            return self.with_variables(other._variables), other
        raise PolynomialError(
            f"variable lists differ: {list(self._variables)} vs {list(other._variables)}"
        )

    def __add__(self, other: object) -> "Polynomial":
        a, b = self._align(other)
        acc = dict(a._terms)
        for mono, coef in b._terms:
            acc[mono] = acc.get(mono, Fraction(0)) + coef
        return Polynomial._raw(a._variables, acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self._variables, {m: -c for m, c in self._terms})

    def __sub__(self, other: object) -> "Polynomial":
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other: object) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: object) -> "Polynomial":
        a, b = self._align(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in a._terms:
            for m2, c2 in b._terms:
                mono = tuple(x + y for x, y in zip(m1, m2))
                acc[mono] = acc.get(mono, Fraction(0)) + c1 * c2
        return Polynomial._raw(a._variables, acc)

    __rmul__ = __mul__

    def scale(self, factor: object) -> "Polynomial":
        f = as_rational(factor)
        return Polynomial._raw(self._variables, {m: c * f for m, c in self._terms})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise PolynomialError("negative powers are not polynomials")
        result = Polynomial.constant(1, self._variables)
        for _ in range(exponent):
            result = result * self
        return result

    def partial(self, var: str | int) -> "Polynomial":
        idx = _index_of(var, self._variables)
        acc: dict[Monomial, Fraction] = {}
        for mono, coef in self._terms:
            e = mono[idx]
            if e == 0:
                continue
            lowered = mono[:idx] + (e - 1,) + mono[idx + 1:]
            acc[lowered] = acc.get(lowered, Fraction(0)) + coef * e
        return Polynomial._raw(self._variables, acc)

    def gradient(self) -> list["Polynomial"]:
        return [self.partial(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence[object]) -> Fraction:
        if len(point) != self.nvars:
            raise PolynomialError(f"point has {len(point)} coordinates, expected {self.nvars}")
        values = [as_rational(v) for v in point]
        total = Fraction(0)
        for mono, coef in self._terms:
            term = coef
            for v, e in zip(values, mono):
                if e:
                    term *= v**e
            total += term
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        """Double-precision evaluation for the sampled checks."""
        if len(point) != self.nvars:
            raise PolynomialError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0.0
        for mono, coef in self._terms:
            term = float(coef)
            for v, e in zip(point, mono):
                if e:
                    term *= float(v) ** e
            total += term
        return total

    # -----------------------------
    # Equality / display
    # -----------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._variables == other._variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._variables, self._terms))

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, variables={list(self._variables)})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for mono, coef in self._terms:
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self._variables, mono)
                if e
            ]
            mag = abs(coef)
            if factors and mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_rational(mag)] + factors)
            sign = "-" if coef < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_sympy(self) -> sympy.Expr:
        symbols = [sympy.Symbol(v) for v in self._variables]
        expr = sympy.Integer(0)
        for mono, coef in self._terms:
            term = sympy.Rational(coef.numerator, coef.denominator)
            for s, e in zip(symbols, mono):
                term *= s**e
            expr += term
        return expr


def _canonical(cleaned: dict[Monomial, Fraction]) -> tuple[tuple[Monomial, Fraction], ...]:
    return tuple(sorted(((m, c) for m, c in cleaned.items() if c != 0), key=_grlex_key, reverse=True))


def _index_of(var: str | int, variables: tuple[str, ...]) -> int:
    if isinstance(var, int) and not isinstance(var, bool):
        if 0 <= var < len(variables):
            return var
        raise PolynomialError(f"variable index {var} out of range for {list(variables)}")
    try:
        return variables.index(str(var))
    except ValueError:
        raise PolynomialError(f"unknown variable {var!r}; known: {list(variables)}") from None


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# -----------------------------
# Module-level operations
# -----------------------------
def poly_arith(lhs: Polynomial, rhs: Polynomial, op: Literal["add", "sub", "mul"]) -> Polynomial:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise PolynomialError(f"unknown operation {op!r}; expected add, sub or mul")


def poly_partial(p: Polynomial, var: str | int) -> Polynomial:
    return p.partial(var)


def poly_eval(p: Polynomial, point: Sequence[object]) -> Fraction:
    return p.evaluate(point)


def poly_sum(items: Iterable[Polynomial], variables: Sequence[str]) -> Polynomial:
    total = Polynomial.zero(variables)
    for p in items:
        total = total + p
    return total
