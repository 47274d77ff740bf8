"""Ideals of Q[x1..xn] and the ideal-theoretic primitives built on Groebner bases."""

from __future__ import annotations

import itertools
from math import comb
from typing import Iterable, Sequence

from .groebner import buchberger, normal_form_poly
from .poly import GREVLEX, MonomialOrder, Poly, RingMismatch, format_poly

DEFAULT_MINOR_LIMIT = 100_000


class GuardExceeded(RuntimeError):
    """A configurable computation guard (minor count, recursion depth) tripped."""


class Ideal:
    """Ideal given by a finite generator list over a fixed ring.

    Zero generators are dropped; any nonzero constant collapses the generator
    list to the canonical unit ideal ``[1]``.
    """

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, ring: Sequence[str], generators: Iterable[Poly] = ()):
        self.ring = tuple(ring)
        gens = []
        seen = set()
        unit = False
        for g in generators:
            if not isinstance(g, Poly):
                g = Poly.const(self.ring, g)
            if g.vars != self.ring:
                raise RingMismatch(f"generator over {g.vars}, ideal over {self.ring}")
            if g.is_zero():
                continue
            if g.is_constant():
                unit = True
                break
            if g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = (Poly.const(self.ring, 1),) if unit else tuple(gens)
        self._gb = {}

    @classmethod
    def parse(cls, ring: Sequence[str], texts: Iterable[str]) -> "Ideal":
        return cls(ring, [Poly.parse(t, ring) for t in texts])

    @classmethod
    def unit(cls, ring: Sequence[str]) -> "Ideal":
        return cls(ring, [Poly.const(ring, 1)])

    @classmethod
    def zero(cls, ring: Sequence[str]) -> "Ideal":
        return cls(ring, [])

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]}, ring={list(self.ring)})"

    def __add__(self, other: "Ideal | Iterable[Poly]") -> "Ideal":
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatch(f"ideal sum over {self.ring} and {other.ring}")
            other = other.generators
        return Ideal(self.ring, list(self.generators) + list(other))

    def product(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise RingMismatch("ideal product over different rings")
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return self.gb()[:1] == [Poly.const(self.ring, 1)]

    def gb(self, order: MonomialOrder = GREVLEX) -> list[Poly]:
        """Reduced Groebner basis (cached per order)."""
        if order not in self._gb:
            out = buchberger([g.terms for g in self.generators], order.key())
            self._gb[order] = [Poly._raw(self.ring, t) for t in out]
        return self._gb[order]

    def contains(self, p: Poly) -> bool:
        return normal_form(p, self.gb()).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def same_ideal(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def vanishes_on(self, g: Poly) -> bool:
        """True iff ``g`` vanishes on all of V(self), i.e. g lies in the radical."""
        if self.contains(g):
            return True
        return saturate(self, g).is_unit()

    def to_ring(self, ring: Sequence[str]) -> "Ideal":
        return Ideal(ring, [g.to_ring(ring) for g in self.generators])

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=0)

    def serialize(self) -> list[str]:
        return sorted(format_poly(g) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb() == other.gb()

    def __hash__(self):
        return hash((self.ring, tuple(self.gb())))


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX) -> Ideal:
    """The reduced Groebner basis of ``I`` for ``order``, as an Ideal."""
    out = Ideal(I.ring, I.gb(order))
    out._gb[order] = list(out.generators)
    return out


def normal_form(p: Poly, G: Ideal | Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Remainder of ``p`` modulo a Groebner basis ``G`` (zero iff p lies in the ideal)."""
    basis = G.generators if isinstance(G, Ideal) else G
    if isinstance(G, Ideal) and G.ring != p.vars:
        raise RingMismatch(f"ring mismatch in normal_form: {p.vars} vs {G.ring}")
    return normal_form_poly(p, basis, order)


def _fresh(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    i = 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def eliminate(I: Ideal, keep: Sequence[str]) -> Ideal:
    """I intersected with Q[keep], returned as an ideal over ``keep`` (in ring order)."""
    keep_set = set(keep)
    unknown = keep_set - set(I.ring)
    if unknown:
        raise RingMismatch(f"variables {sorted(unknown)} not in ring {I.ring}")
    kept = tuple(v for v in I.ring if v in keep_set)
    drop = tuple(v for v in I.ring if v not in keep_set)
    if not drop:
        return groebner_basis(I)
    order_ring = drop + kept
    J = I.to_ring(order_ring)
    gb = J.gb(MonomialOrder.block(len(drop)))
    k = len(drop)
    out = [g for g in gb if all(not any(e[:k]) for e in g.terms)]
    return Ideal(kept, [g.to_ring(kept) for g in out])


def saturate(I: Ideal, g: Poly) -> Ideal:
    """I : g^infinity via an auxiliary inverse variable."""
    if g.vars != I.ring:
        raise RingMismatch("saturating polynomial lives in a different ring")
    if g.is_zero():
        raise ValueError("cannot saturate by zero")
    if g.is_constant():
        return groebner_basis(I)
    if I.is_zero():
        return I
    t = _fresh("_sat", I.ring)
    ring = (t,) + I.ring
    J = I.to_ring(ring) + [Poly.const(ring, 1) - Poly.var(ring, t) * g.to_ring(ring)]
    return eliminate(J, I.ring)


def monomial_dimension(leads: Sequence[tuple[int, ...]], n: int) -> int:
    """Dimension of V(monomial ideal) from its generators' exponents; -1 if unit."""
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in leads]
    if any(not s for s in supports):
        return -1
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            Sset = set(S)
            if not any(s <= Sset for s in supports):
                return size
    return -1


def ideal_dimension(I: Ideal) -> int | str:
    """Krull dimension of V(I); ``"empty"`` when 1 is in I."""
    gb = I.gb()
    if gb[:1] == [Poly.const(I.ring, 1)]:
        return "empty"
    leads = [g.leading_term()[0] for g in gb]
    return monomial_dimension(leads, len(I.ring))


def closure_of_image(I: Ideal, mapping: Sequence[Poly], target_vars: Sequence[str]) -> Ideal:
    """Ideal of the Zariski closure of the image of V(I) under ``mapping``."""
    target_vars = tuple(target_vars)
    if len(mapping) != len(target_vars):
        raise ValueError("mapping and target variables differ in length")
    taken = set(I.ring) | set(target_vars)
    src = tuple(_fresh(v + "_src", taken) if v in target_vars else v for v in I.ring)
    ring = src + target_vars
    rename = {v: Poly.var(ring, w) for v, w in zip(I.ring, src)}
    graph = [g.subs(rename, ring) for g in I.generators]
    for y, phi in zip(target_vars, mapping):
        if phi.vars != I.ring:
            raise RingMismatch("map components must live in the source ring")
        graph.append(Poly.var(ring, y) - phi.subs(rename, ring))
    return eliminate(Ideal(ring, graph), target_vars)


def all_minors(M: Sequence[Sequence[Poly]], k: int, limit: int = DEFAULT_MINOR_LIMIT) -> list[Poly]:
    """All k x k minors of a polynomial matrix, by memoized Laplace expansion."""
    rows, cols = len(M), (len(M[0]) if M else 0)
    if k <= 0:
        return []
    if k > min(rows, cols):
        return []
    count = comb(rows, k) * comb(cols, k)
    if count > limit:
        raise GuardExceeded(f"{count} minors of size {k} exceed the limit {limit}")
    memo: dict = {}

    def minor(r: tuple, c: tuple) -> Poly:
        if len(r) == 1:
            return M[r[0]][c[0]]
        key = (r, c)
        if key in memo:
            return memo[key]
        total = None
        for j, col in enumerate(c):
            entry = M[r[0]][col]
            if entry.is_zero():
                continue
            sub = minor(r[1:], c[:j] + c[j + 1:])
            if sub.is_zero():
                continue
            term = entry * sub if j % 2 == 0 else -(entry * sub)
            total = term if total is None else total + term
        if total is None:
            total = Poly.zero(M[0][0].vars)
        memo[key] = total
        return total

    out = []
    for r in itertools.combinations(range(rows), k):
        for c in itertools.combinations(range(cols), k):
            out.append(minor(r, c))
    return out


def rank_locus(M: Sequence[Sequence[Poly]], r: int, ring: Sequence[str] | None = None,
               limit: int = DEFAULT_MINOR_LIMIT) -> Ideal:
    """Ideal of (r+1)-minors; V(result) is where rank M <= r."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if r < 0 or r > min(rows, cols):
        raise ValueError(f"rank bound {r} outside [0, {min(rows, cols)}]")
    if ring is None:
        ring = M[0][0].vars if rows and cols else ()
    return Ideal(ring, all_minors(M, r + 1, limit))
