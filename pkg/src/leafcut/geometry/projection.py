"""Fibre-dimension stratification and exact images of coordinate projections.

The base is split recursively on the leading coefficients (in the fibre
variables) of a block-order Groebner basis.  Where none of them vanish the
basis specializes to a Groebner basis of every fibre, so the fibre dimension
is read off the leading monomials.  A coefficient that vanishes on the whole
current region is added to the base ideal and the basis recomputed; the base
ideal grows strictly each time, which bounds the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..algebra import GuardExceeded, Ideal, MonomialOrder, Poly, RingMismatch, eliminate, saturate
from ..algebra.ideal import _fresh, monomial_dimension
from .constructible import ConstructibleSet, make_piece, product

DEFAULT_DEPTH_LIMIT = 200


@dataclass(frozen=True)
class Stratum:
    base: Ideal
    nonzero: tuple[Poly, ...]
    fibre_dim: int

    def piece(self):
        return make_piece(self.base, [product(self.base.ring, self.nonzero)])


def _region_empty(B: Ideal, N: Sequence[Poly]) -> bool:
    if B.is_unit():
        return True
    if not N:
        return False
    return saturate(B, product(B.ring, N)).is_unit()


def _vanishes_on_region(c: Poly, B: Ideal, N: Sequence[Poly]) -> bool:
    return _region_empty(B, list(N) + [c])


def _split_fibre_coeffs(g: Poly, k: int):
    """Leading fibre monomial of g and its coefficient as a polynomial in the base block."""
    key = MonomialOrder("grevlex").key()
    lead = max({e[:k] for e in g.terms}, key=key)
    coeff = {e[k:]: c for e, c in g.terms.items() if e[:k] == lead}
    return lead, coeff


def fibre_strata(I: Ideal, base_vars: Sequence[str], depth_limit: int = DEFAULT_DEPTH_LIMIT) -> list[Stratum]:
    """Partition the base into locally closed strata of constant fibre dimension (-1 = empty fibre)."""
    base_vars = tuple(base_vars)
    missing = set(base_vars) - set(I.ring)
    if missing:
        raise RingMismatch(f"base variables {sorted(missing)} not in ring {I.ring}")
    fibre_vars = tuple(v for v in I.ring if v not in base_vars)
    ring = fibre_vars + base_vars
    J = I.to_ring(ring)
    k = len(fibre_vars)
    order = MonomialOrder.block(k) if k else MonomialOrder("grevlex")

    def lift(p: Poly) -> Poly:
        return p.to_ring(ring)

    def down(terms: dict) -> Poly:
        return Poly._raw(base_vars, terms)

    def strata(B: Ideal, N: tuple, depth: int) -> list[Stratum]:
        if depth > depth_limit:
            raise GuardExceeded(f"stratification depth exceeded {depth_limit}")
        if _region_empty(B, N):
            return []
        G = (J + [lift(b) for b in B.generators]).gb(order)
        Gy = [g for g in G if all(not any(e[:k]) for e in g.terms)]
        Gx = [g for g in G if any(any(e[:k]) for e in g.terms)]
        out: list[Stratum] = []
        gy = [down({e[k:]: c for e, c in g.terms.items()}) for g in Gy]
        # the part of the region off the closure of the image has empty fibres
        for i, g in enumerate(gy):
            Bi = B + gy[:i]
            if not _region_empty(Bi, N + (g,)):
                out.append(Stratum(Bi, N + (g,), -1))
        B = Ideal(base_vars, gy)
        if _region_empty(B, N):
            return out
        N = tuple(N)
        leads = []
        for g in Gx:
            lead, coeff = _split_fibre_coeffs(g, k)
            leads.append(lead)
            c = down(coeff)
            if c.is_constant():
                continue
            if _vanishes_on_region(c, B, N):
                return out + strata(B + [c], N, depth + 1)
            if _region_empty(B + [c], N):
                continue
            out.extend(strata(B + [c], N, depth + 1))
            N = N + (c,)
        out.append(Stratum(B, N, monomial_dimension(leads, k)))
        return out

    return strata(Ideal.zero(base_vars), (), 0)


def fibre_dim_stratify(I: Ideal, base_vars: Sequence[str], d: int) -> ConstructibleSet:
    """Base points whose fibre has dimension exactly d (d = -1: empty fibre)."""
    base_vars = tuple(base_vars)
    pieces = [s.piece() for s in fibre_strata(I, base_vars) if s.fibre_dim == d]
    return ConstructibleSet(base_vars, pieces)


def _closed_parts(C: Ideal, O: Ideal):
    """V(C) minus V(O) as V(C + o_<i) with o_i inverted, i.e. closed sets one variable up."""
    t = _fresh("_inv", C.ring)
    ring = C.ring + (t,)
    o = [g for g in O.generators if not C.contains(g)]
    for i, oi in enumerate(o):
        gens = [g.to_ring(ring) for g in C.generators] + [g.to_ring(ring) for g in o[:i]]
        gens.append(Poly.const(ring, 1) - Poly.var(ring, t) * oi.to_ring(ring))
        yield Ideal(ring, gens)


def cs_project(A: ConstructibleSet, keep: Sequence[str],
               depth_limit: int = DEFAULT_DEPTH_LIMIT) -> ConstructibleSet:
    """Exact image of A under the projection onto ``keep`` (kept in ring order)."""
    keep_set = set(keep)
    missing = keep_set - set(A.ring)
    if missing:
        raise RingMismatch(f"variables {sorted(missing)} not in ring {A.ring}")
    kept = tuple(v for v in A.ring if v in keep_set)
    pieces = []
    for C, O in A.pieces:
        for J in _closed_parts(C, O):
            for s in fibre_strata(J, kept, depth_limit):
                if s.fibre_dim >= 0:
                    pieces.append(s.piece())
    return ConstructibleSet(kept, pieces)


def closure_of_projection(A: ConstructibleSet, keep: Sequence[str]) -> Ideal:
    """Ideal of the Zariski closure of the projection (fast mode: no boundary analysis)."""
    keep_set = set(keep)
    kept = tuple(v for v in A.ring if v in keep_set)
    out = Ideal.unit(kept)
    for C, O in A.pieces:
        for J in _closed_parts(C, O):
            E = eliminate(J, kept)
            out = _intersect_ideals(out, E)
    return out


def _intersect_ideals(I: Ideal, J: Ideal) -> Ideal:
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    t = _fresh("_w", I.ring)
    ring = (t,) + I.ring
    tv = Poly.var(ring, t)
    one = Poly.const(ring, 1)
    gens = [tv * g.to_ring(ring) for g in I.generators] + [(one - tv) * g.to_ring(ring) for g in J.generators]
    return eliminate(Ideal(ring, gens), I.ring)
