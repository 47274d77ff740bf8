"""Rational functions over Q as gcd-reduced numerator/denominator pairs.

Multivariate gcds go through sympy's sparse polynomial rings; everything else
stays in :class:`Poly`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as sympy_ring

from .poly import GREVLEX, Poly, RingMismatch, format_poly, parse_poly


@lru_cache(maxsize=None)
def _sympy_ring(vars: tuple):
    R, *_ = sympy_ring(",".join(vars), QQ)
    return R


def to_sympy(p: Poly):
    R = _sympy_ring(p.vars)
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()})


def from_sympy(el, vars: Sequence[str]) -> Poly:
    return Poly._raw(tuple(vars), {tuple(e): Fraction(int(c.numerator), int(c.denominator))
                                   for e, c in el.terms()})


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if not a.vars:
        return Poly.const((), 1)
    g = to_sympy(a).gcd(to_sympy(b))
    return from_sympy(g, a.vars).monic()


def poly_exact_div(a: Poly, b: Poly) -> Poly:
    """a / b when b divides a exactly."""
    if not a.vars:
        return Poly.const((), a.constant_value() / b.constant_value())
    q, r = divmod(to_sympy(a), to_sympy(b))
    if r:
        raise ArithmeticError("inexact polynomial division")
    return from_sympy(q, a.vars)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        raise ValueError("lcm with zero")
    return poly_exact_div(a * b, poly_gcd(a, b)).monic()


class RationalFunction:
    """numerator/denominator with denominator leading coefficient 1 (grevlex)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduce: bool = True):
        if den is None:
            den = Poly.const(num.vars, 1)
        if num.vars != den.vars:
            raise RingMismatch("numerator and denominator over different rings")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(num.vars, 1)
            return
        if reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = poly_exact_div(num, g), poly_exact_div(den, g)
        _, c = den.leading_term(GREVLEX)
        if c != 1:
            num, den = num * (1 / c), den * (1 / c)
        self.num, self.den = num, den

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "RationalFunction":
        return cls(Poly.const(vars, c))

    @classmethod
    def parse(cls, num: str, den: str, vars: Sequence[str]) -> "RationalFunction":
        return cls(parse_poly(num, vars), parse_poly(den, vars))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise RingMismatch("rational functions over different rings")
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction.const(self.vars, other)

    def __add__(self, other):
        o = self._lift(other)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return RationalFunction(Poly.zero(self.vars))
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den, self.num) ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, RingMismatch):
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def diff(self, name: str) -> "RationalFunction":
        n, d = self.num, self.den
        if d.is_constant():
            return RationalFunction(n.diff(name), d, reduce=False)
        return RationalFunction(n.diff(name) * d - n * d.diff(name), d * d)

    def evaluate(self, point: Sequence | Mapping) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(point) / d

    def evaluate_float(self, point: Sequence) -> complex:
        return self.num.evaluate_float(point) / self.den.evaluate_float(point)

    def to_ring(self, vars: Sequence[str]) -> "RationalFunction":
        return RationalFunction(self.num.to_ring(vars), self.den.to_ring(vars), reduce=False)

    def serialize(self) -> list[str]:
        return [format_poly(self.num), format_poly(self.den)]

    def __repr__(self):
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def squarefree_part(p: Poly) -> Poly:
    """Product of the distinct irreducible factors of p (over Q), made monic."""
    if p.is_constant() or not p.vars:
        return p
    return from_sympy(to_sympy(p).sqf_part(), p.vars).monic()
