"""Cyclic covers v^N = prod (u - p)^a_p of the line."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import sympy

from ..algebra import Poly, parse_poly


@dataclass(frozen=True)
class SuperellipticFamily:
    N: int
    exponents: tuple
    points: tuple
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(a) for a in self.exponents))
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        if not self.params:
            object.__setattr__(self, "params", _params_in_order(self.points))
        object.__setattr__(self, "params", tuple(self.params))

    @classmethod
    def from_json(cls, data: dict) -> "SuperellipticFamily":
        return cls(int(data["N"]), tuple(data["exponents"]), tuple(data["points"]),
                   tuple(data.get("params", ())))

    def to_json(self) -> dict:
        return {"N": self.N, "exponents": list(self.exponents), "points": list(self.points),
                "params": list(self.params)}

    @property
    def infinity_exponent(self) -> int:
        return (-sum(self.exponents)) % self.N

    @property
    def weights(self) -> tuple:
        return tuple(Fraction(a, self.N) for a in self.exponents) + (Fraction(self.infinity_exponent, self.N),)

    def point_polys(self) -> list[Poly]:
        return [parse_poly(p, self.params) for p in self.points]

    def point_exprs(self) -> list:
        syms = self.symbols()
        return [poly_to_sympy(p, syms) for p in self.point_polys()]

    def symbols(self) -> tuple:
        return tuple(sympy.Symbol(v) for v in self.params)

    def diagnostics(self) -> list[str]:
        out = []
        if self.N < 2:
            out.append("N must be at least 2")
        if len(self.exponents) != len(self.points):
            out.append("one exponent per finite point is required")
        for a, p in zip(self.exponents, self.points):
            if not 0 < a < self.N:
                out.append(f"degenerate exponent {a} at u = {p} (need 0 < a < N)")
        try:
            polys = self.point_polys()
        except Exception as exc:  # noqa: BLE001 - reported as a diagnostic
            return out + [f"unparseable point: {exc}"]
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                if (polys[i] - polys[j]).is_zero():
                    out.append(f"points {self.points[i]} and {self.points[j]} coincide")
        if self.N >= 2 and gcd(self.N, *self.exponents) != 1:
            out.append("cover is disconnected: gcd of N and the exponents exceeds 1")
        return out

    def validate(self):
        problems = self.diagnostics()
        if problems:
            raise ValueError("; ".join(problems))

    def relevant(self, k: int) -> tuple[list[int], bool]:
        """Finite point indices with k*a not divisible by N, and whether infinity is such a point."""
        fin = [i for i, a in enumerate(self.exponents) if (k * a) % self.N]
        return fin, bool((k * self.infinity_exponent) % self.N)

    def eigenspace_rank(self, k: int) -> int:
        fin, inf = self.relevant(k)
        return max(len(fin) + int(inf) - 2, 0)

    def open_base_polynomial(self) -> Poly:
        """Product of point differences; the family is smooth where it is nonzero."""
        pts = self.point_polys()
        out = Poly.const(self.params, 1)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = pts[i] - pts[j]
                if not d.is_constant():
                    out = out * d
        return out


def _params_in_order(points: Sequence[str]) -> tuple:
    seen = []
    for p in points:
        for name in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", p):
            if name not in seen:
                seen.append(name)
    return tuple(seen)


def poly_to_sympy(p: Poly, syms: Sequence) -> sympy.Expr:
    total = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                term *= s ** k
        total += term
    return total


def genus(fam: SuperellipticFamily) -> int:
    """Riemann-Hurwitz: 2 - 2g = 2N - sum over branch points of (N - gcd(a, N))."""
    for a, p in zip(fam.exponents, fam.points):
        if a % fam.N == 0:
            raise ValueError(f"degenerate exponent {a} at u = {p}")
    if gcd(fam.N, *fam.exponents) != 1:
        raise ValueError("cover is disconnected")
    ram = sum(fam.N - gcd(a, fam.N) for a in fam.exponents + (fam.infinity_exponent,))
    two_minus_2g = 2 * fam.N - ram
    if two_minus_2g % 2:
        raise ValueError("Riemann-Hurwitz count is odd; exponent data inconsistent")
    return (2 - two_minus_2g) // 2
