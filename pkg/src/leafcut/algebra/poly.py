"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is a map from exponent tuples to nonzero :class:`~fractions.Fraction`
coefficients, tagged with an ordered tuple of variable names.  Values are treated
as immutable once built.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class RingMismatch(ValueError):
    """Raised when two objects living over different variable lists are combined."""


@dataclass(frozen=True)
class MonomialOrder:
    """Total multiplicative order on monomials.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order compares
    the first ``split`` exponents by grevlex and breaks ties with grevlex on the
    rest, so it eliminates the first block.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    @classmethod
    def block(cls, split: int) -> "MonomialOrder":
        return cls("block", split)

    def key(self) -> Callable[[Exponent], tuple]:
        if self.kind == "lex":
            return _lex_key
        if self.kind == "grevlex":
            return _grevlex_key
        k = self.split

        def block_key(e):
            return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

        return block_key


def _lex_key(e: Exponent) -> tuple:
    return e


def _grevlex_key(e: Exponent) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    if hasattr(c, "numerator") and hasattr(c, "denominator"):
        return Fraction(int(c.numerator), int(c.denominator))
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


class Poly:
    """Polynomial in ``vars`` with rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for ring {self.vars}")
            c = _coerce_coeff(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "Poly":
        vars = tuple(vars)
        c = _coerce_coeff(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls._raw(vars, {tuple(e): Fraction(1)})

    @classmethod
    def gens(cls, vars: Sequence[str]) -> list["Poly"]:
        return [cls.var(vars, v) for v in vars]

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> "Poly":
        return parse_poly(text, vars)

    # basic queries

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def support(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.vars, e) if k)
        return used

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key())
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        if c == 1:
            return self
        inv = 1 / c
        return Poly._raw(self.vars, {e: v * inv for e, v in self.terms.items()})

    # arithmetic

    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise RingMismatch(f"ring mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _coerce_coeff(other)
            if not c:
                return Poly.zero(self.vars)
            return Poly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("only division by nonzero constants is supported")
            other = other.constant_value()
        return self * (1 / _coerce_coeff(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self == Poly.const(self.vars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution

    def diff(self, name: str) -> "Poly":
        i = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Poly._raw(self.vars, out)

    def evaluate(self, point: Sequence | Mapping[str, object]) -> Fraction:
        if isinstance(point, Mapping):
            point = [point[v] for v in self.vars]
        vals = [_coerce_coeff(x) for x in point]
        if len(vals) != self.nvars:
            raise ValueError("point has the wrong length")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x**k
            total += t
        return total

    def evaluate_float(self, point: Sequence) -> complex:
        total = 0
        for e, c in self.terms.items():
            t = complex(c.numerator) / c.denominator
            for x, k in zip(point, e):
                if k:
                    t *= x**k
            total += t
        return total

    def subs(self, values: Mapping[str, "Poly | object"], target_vars: Sequence[str] | None = None) -> "Poly":
        """Substitute polynomials (in ``target_vars``) for some variables.

        Variables not in ``values`` must appear in ``target_vars`` and are kept.
        """
        target = tuple(target_vars) if target_vars is not None else self.vars
        images = []
        for v in self.vars:
            if v in values:
                val = values[v]
                images.append(val if isinstance(val, Poly) else Poly.const(target, val))
            else:
                images.append(Poly.var(target, v))
        for img in images:
            if img.vars != target:
                raise RingMismatch("substituted value lives in the wrong ring")
        out = Poly.zero(target)
        cache: dict = {}
        for e, c in self.terms.items():
            t = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    t = t * cache[key]
            out = out + t
        return out

    def to_ring(self, vars: Sequence[str]) -> "Poly":
        """Re-express in a ring whose variable list contains every variable used here."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = {v: i for i, v in enumerate(vars)}
        used = [i for i in range(self.nvars) if any(e[i] for e in self.terms)]
        for i in used:
            if self.vars[i] not in idx:
                raise RingMismatch(f"variable {self.vars[i]} missing from target ring {vars}")
        pos = [idx.get(v) for v in self.vars]
        out = {}
        n = len(vars)
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return Poly._raw(vars, out)

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Exponent, Fraction]]:
        key = order.key()
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def to_string(self, order: MonomialOrder = GREVLEX) -> str:
        return format_poly(self, order)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, vars={self.vars})"


# canonical text form


def format_poly(p: Poly, order: MonomialOrder = GREVLEX) -> str:
    """Serialize as ``num/den*x^a*y^b + ...`` with terms sorted by ``order``."""
    if not p.terms:
        return "0/1"
    parts = []
    for e, c in p.sorted_terms(order):
        s = f"{c.numerator}/{c.denominator}"
        for v, k in zip(p.vars, e):
            if k:
                s += f"*{v}^{k}"
        parts.append(s)
    return " + ".join(parts)


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse an arithmetic expression in ``vars``.

    Accepts integers, ``+ - *``, ``/`` by constants, ``^`` or ``**`` with
    nonnegative integer exponents, and parentheses.
    """
    vars = tuple(vars)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    return _eval_node(tree.body, vars, text)


def _eval_node(node, vars, text) -> Poly:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Poly.const(vars, node.value)
    if isinstance(node, ast.Name):
        if node.id not in vars:
            raise ValueError(f"unknown variable {node.id!r} in {text!r} (ring {list(vars)})")
        return Poly.var(vars, node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, vars, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        a = _eval_node(node.left, vars, text)
        if isinstance(node.op, ast.Pow):
            b = _eval_node(node.right, vars, text)
            k = b.constant_value()
            if not b.is_constant() or k.denominator != 1 or k < 0:
                raise ValueError(f"bad exponent in {text!r}")
            return a ** int(k)
        b = _eval_node(node.right, vars, text)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if not b.is_constant() or b.is_zero():
                raise ValueError(f"division by a non-constant in {text!r}")
            return a / b
    raise ValueError(f"unsupported syntax in polynomial {text!r}")


def common_ring(polys: Iterable[Poly]) -> tuple[str, ...]:
    rings = {p.vars for p in polys}
    if len(rings) > 1:
        raise RingMismatch(f"polynomials over different rings: {sorted(rings)}")
    return rings.pop() if rings else ()
