"""Candidate loci for maximal atypical intersections of leaves with a family.

For each e the driver forms Y(e) (leaf/fibre intersections of dimension >= e
over fibres whose image dimension lies in the atypical range), removes the
points explained by a strictly larger fibre (K'(e)) that in turn contain a
strictly smaller one (K(e)), and projects what is left to the base.

Fibre inclusion is decided ideal-theoretically: Z_y inside Z_y' is encoded as
"every generator of I(y') reduces to zero modulo the fibre basis of I(y)".
This needs the x-leading coefficients of the block basis to be constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..algebra import Ideal, MonomialOrder, Poly
from ..algebra.groebner import normal_form_poly
from ..algebra.ideal import DEFAULT_MINOR_LIMIT, _fresh
from ..connection import LeafDistribution, TorsorSpace
from ..geometry import (
    ConstructibleSet,
    contained_in_union,
    cs_difference,
    cs_intersect,
    cs_project,
    cs_union,
    fibre_strata,
    make_piece,
)
from .atypical import atypical_range
from .loci import FamilyOfSubvarieties, family_leaf_locus, leaf_locus


class FamilyValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ZPConfig:
    dim_S: int
    dim_flag: int
    families: tuple
    weakly_special: tuple = ()
    dim_H: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "weakly_special", tuple(self.weakly_special))
        if not self.families:
            raise ValueError("at least one family is required")
        if self.dim_flag < 0:
            raise ValueError("dim_flag must be nonnegative")


def _rename_poly(p: Poly, mapping: dict, ring: Sequence[str]) -> Poly:
    return p.subs({a: Poly.var(ring, b) for a, b in mapping.items()}, ring)


def rename_ideal(I: Ideal, mapping: dict, ring: Sequence[str]) -> Ideal:
    return Ideal(ring, [_rename_poly(g, mapping, ring) for g in I.generators])


def rename_set(A: ConstructibleSet, mapping: dict, ring: Sequence[str]) -> ConstructibleSet:
    return ConstructibleSet(ring, [(rename_ideal(C, mapping, ring), rename_ideal(O, mapping, ring))
                                   for C, O in A.pieces])


def fibre_image_strata(f: FamilyOfSubvarieties, offset: int, upper: int) -> ConstructibleSet:
    """Parameters y with 0 <= dim Z_y - offset < upper."""
    pieces = [s.piece() for s in fibre_strata(f.total_ideal, f.param_vars)
              if s.fibre_dim >= 0 and 0 <= s.fibre_dim - offset < upper]
    return ConstructibleSet(f.param_vars, pieces)


def inclusion_ideal(T: TorsorSpace, small: FamilyOfSubvarieties, big: FamilyOfSubvarieties,
                    small_names: Sequence[str], big_names: Sequence[str]) -> Ideal:
    """Ideal in (small_names, big_names) whose zeros are the pairs with I_big(y') inside I_small(y)."""
    small_names, big_names = tuple(small_names), tuple(big_names)
    n = len(T.ring)
    ring = T.ring + small_names + big_names
    order = MonomialOrder.block(n)
    src = T.ring + small.param_vars
    G = small.total_ideal.to_ring(src).gb(order)
    sm = dict(zip(small.param_vars, small_names))
    bm = dict(zip(big.param_vars, big_names))
    basis = []
    for g in G:
        x_lead = max((e[:n] for e in g.terms), key=MonomialOrder("grevlex").key())
        if any(x_lead):
            coeff = [e for e in g.terms if e[:n] == x_lead]
            if any(any(e[n:]) for e in coeff):
                raise FamilyValidationError(
                    "family has parameter-dependent leading terms; fibre inclusion is not decidable here")
        basis.append(_rename_poly(g, sm, ring))
    coeffs = []
    for h in big.total_ideal.generators:
        r = normal_form_poly(_rename_poly(h.to_ring(T.ring + big.param_vars), bm, ring), basis, order)
        by_x: dict = {}
        for e, c in r.terms.items():
            by_x.setdefault(e[:n], {})[e[n:]] = c
        params = small_names + big_names
        coeffs.extend(Poly._raw(params, t) for t in by_x.values())
    return Ideal(small_names + big_names, coeffs)


def strict_inclusion(T, small, big, small_names, big_names) -> ConstructibleSet:
    """Pairs (y, y') with Z_y strictly inside Z_y' (ring: small_names + big_names)."""
    forward = inclusion_ideal(T, small, big, small_names, big_names)
    backward = inclusion_ideal(T, big, small, big_names, small_names)
    ring = forward.ring
    backward = backward.to_ring(ring)
    return ConstructibleSet(ring, [make_piece(forward, backward)]).simplify()


@dataclass
class ZPResult:
    e: int
    rho: int
    Y: list
    Kprime: list
    K: list
    candidates: list
    cover: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "e": self.e,
            "rho": self.rho,
            "fiber_inclusion": "ideal-theoretic",
            "Y": [A.to_json() for A in self.Y],
            "Kprime": [A.to_json() for A in self.Kprime],
            "K": [A.to_json() for A in self.K],
            "candidates": [A.to_json() for A in self.candidates],
        }
        if self.cover:
            out["weakly_special_cover"] = self.cover
        return out


def zp_candidate_loci(T: TorsorSpace, L: LeafDistribution, cfg: ZPConfig, e: int,
                      limit: int = DEFAULT_MINOR_LIMIT) -> ZPResult:
    dim_H = T.group_dimension if cfg.dim_H is None else cfg.dim_H
    offset = cfg.dim_S + dim_H - cfg.dim_flag
    rho, _ = atypical_range(e, cfg.dim_S, cfg.dim_flag)
    fams = cfg.families
    frame = tuple(v for v in T.ring if v != T.inverse_var)
    base = T.base_vars

    loci: dict = {}

    def Y(k: int, level: int) -> ConstructibleSet:
        if (k, level) not in loci:
            f = fams[k]
            r, _ = atypical_range(level, cfg.dim_S, cfg.dim_flag)
            res = leaf_locus(T, L, f, level, limit)
            strata = fibre_image_strata(f, offset, r).to_ring(res.Y_locus.ring)
            loci[(k, level)] = cs_intersect(res.Y_locus, strata).simplify()
        return loci[(k, level)]

    def primed(k: int) -> dict:
        taken = set(T.ring)
        for f in fams:
            taken |= set(f.param_vars)
        out = {}
        for v in fams[k].param_vars:
            w = _fresh(v + "_p", taken)
            taken.add(w)
            out[v] = w
        return out

    def related(k: int, level: int, bigger: bool) -> ConstructibleSet:
        """(x, y) in Y(e) for family k with some (x, y') in Y(level) strictly above (or below) it."""
        ring_k = frame + fams[k].param_vars
        acc = ConstructibleSet.empty(ring_k)
        here = Y(k, e)
        if not here.pieces:
            return acc
        for k2 in range(len(fams)):
            there = Y(k2, level)
            if not there.pieces:
                continue
            ren = primed(k2)
            names2 = tuple(ren[v] for v in fams[k2].param_vars)
            ring = ring_k + names2
            if bigger:
                incl = strict_inclusion(T, fams[k], fams[k2], fams[k].param_vars, names2)
            else:
                incl = strict_inclusion(T, fams[k2], fams[k], names2, fams[k].param_vars)
            if not incl.pieces:
                continue
            W = cs_intersect(here.to_ring(ring), rename_set(there, ren, frame + names2).to_ring(ring))
            W = cs_intersect(W, incl.to_ring(ring))
            if W.pieces:
                acc = cs_union(acc, cs_project(W, ring_k))
        return acc.simplify()

    Ys, Kps, Ks, cands, cover = [], [], [], [], []
    for k in range(len(fams)):
        Ye = Y(k, e)
        ring_k = Ye.ring
        Kp = ConstructibleSet.empty(ring_k)
        for level in range(e + 1, cfg.dim_S + 1):
            Kp = cs_union(Kp, related(k, level, bigger=True))
        Kp = Kp.simplify()
        K = cs_intersect(Kp, related(k, e, bigger=False)).simplify() if Kp.pieces else Kp
        rest = cs_difference(Ye, K).simplify()
        cand = cs_project(rest, base).simplify() if rest.pieces else ConstructibleSet.empty(base)
        Ys.append(Ye)
        Kps.append(Kp)
        Ks.append(K)
        cands.append(cand)
        if cfg.weakly_special:
            strata = fibre_image_strata(fams[k], offset, rho)
            Us = []
            for h in cfg.weakly_special:
                res = family_leaf_locus(T, L, fams[k], e, h, limit)
                Us.append(cs_intersect(res.Y_locus, strata.to_ring(res.Y_locus.ring)))
            ok, info = contained_in_union(rest, Us)
            cover.append({"contained": ok, "indices": info} if ok
                         else {"contained": False, "witness": info.to_json()})
    return ZPResult(e, rho, Ys, Kps, Ks, cands, cover)
