"""Loci where flat leaves meet the fibres of a family in excess dimension.

Points are (x, y): x in the frame torsor, y in the parameter space of the
family.  The leaf dimension inside a fibre is bounded above by the rank
deficiency of J_x(family) applied to the leaf fields; the descent keeps
adding those rank conditions until they hold on the whole locus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..algebra import GuardExceeded, Ideal, Poly, RationalFunction, groebner_basis, rank_locus, saturate
from ..algebra.ideal import DEFAULT_MINOR_LIMIT, all_minors
from ..algebra.ratfunc import poly_lcm, squarefree_part
from ..connection import LeafDistribution, TorsorSpace
from ..geometry import AffineChart, ConstructibleSet, closure_of_projection, cs_project
from .atypical import degree_budget

MAX_DESCENT_STAGES = 64


@dataclass(frozen=True)
class FamilyOfSubvarieties:
    total_ideal: Ideal
    param_vars: tuple
    parameter_chart: AffineChart
    fiber_degree_bound: int

    @property
    def ring(self) -> tuple[str, ...]:
        return self.total_ideal.ring

    @property
    def space_vars(self) -> tuple[str, ...]:
        return tuple(v for v in self.ring if v not in self.param_vars)

    @classmethod
    def build(cls, space_ring: Sequence[str], param_vars: Sequence[str], gens: Sequence[str | Poly],
              space_ideal: Ideal | None = None, param_ideal: Sequence[str] = ()) -> "FamilyOfSubvarieties":
        """Family with fibres V(gens)(y) inside V(space_ideal); generators may be text."""
        param_vars = tuple(param_vars)
        clash = set(param_vars) & set(space_ring)
        if clash:
            raise ValueError(f"parameter names {sorted(clash)} clash with space variables")
        ring = tuple(space_ring) + param_vars
        polys = [Poly.parse(g, ring) if isinstance(g, str) else g.to_ring(ring) for g in gens]
        chart = AffineChart(param_vars, Ideal.parse(param_vars, list(param_ideal)))
        polys += [g.to_ring(ring) for g in chart.ideal.generators]
        if space_ideal is not None:
            polys = [g.to_ring(ring) for g in space_ideal.generators] + polys
        total = Ideal(ring, polys)
        return cls(total, param_vars, chart, total.max_degree())

    @classmethod
    def over_torsor(cls, T: TorsorSpace, param_vars: Sequence[str], gens: Sequence[str | Poly],
                    param_ideal: Sequence[str] = ()) -> "FamilyOfSubvarieties":
        return cls.build(T.ring, param_vars, gens, T.constraint_ideal, param_ideal)

    @classmethod
    def over_base(cls, base_vars: Sequence[str], param_vars: Sequence[str], gens: Sequence[str | Poly],
                  param_ideal: Sequence[str] = ()) -> "FamilyOfSubvarieties":
        return cls.build(base_vars, param_vars, gens, None, param_ideal)

    def with_ideal(self, I: Ideal) -> "FamilyOfSubvarieties":
        return FamilyOfSubvarieties(I, self.param_vars, self.parameter_chart, self.fiber_degree_bound)

    def to_json(self) -> dict:
        return {"params": list(self.param_vars), "ideal": self.total_ideal.serialize()}


@dataclass(frozen=True)
class LocusResult:
    Z_locus: Ideal
    Y_locus: ConstructibleSet
    e: int
    degree_certificate: int
    generic_dim: int
    stages: tuple = ()
    closure_only: bool = False
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "generic_tangency_dim": self.generic_dim,
            "Z_locus": {"ring": list(self.Z_locus.ring), "ideal": self.Z_locus.serialize(),
                        "empty": self.Z_locus.is_unit()},
            "Y_locus": self.Y_locus.to_json(),
            "Y_is_closure_only": self.closure_only,
            "degree_certificate": str(self.degree_certificate),
            "descent_stages": [list(s) for s in self.stages],
        }


def _leaf_columns(L: LeafDistribution, ring: tuple) -> tuple[list[list[RationalFunction]], Poly]:
    """Leaf fields over the family ring, each column scaled to be polynomial; also the product of scalings."""
    cols = []
    den_all = Poly.const(ring, 1)
    for X in L.fields:
        den = Poly.const(L.ring, 1)
        for a in X:
            if not a.den.is_constant():
                den = poly_lcm(den, a.den)
        scaled = [(a * RationalFunction(den)).num.to_ring(ring) for a in X]
        cols.append(scaled)
        if not den.is_constant():
            den_all = poly_lcm(den_all, den.to_ring(ring))
    return cols, den_all


def tangency_matrix(I: Ideal, L: LeafDistribution) -> tuple[list[list[Poly]], Poly]:
    """Rows: generators of I (reduced basis); columns: J_x(row) applied to each leaf field."""
    ring = I.ring
    cols, den = _leaf_columns(L, ring)
    rows = I.gb() if not I.is_zero() else []
    M = []
    for g in rows:
        grads = [g.diff(v) for v in L.ring]
        row = []
        for col in cols:
            acc = Poly.zero(ring)
            for d, c in zip(grads, col):
                if not d.is_zero() and not c.is_zero():
                    acc = acc + d * c
            row.append(acc)
        M.append(row)
    return M, den


def _squarefree_ideal(I: Ideal) -> Ideal:
    return Ideal(I.ring, [squarefree_part(g) for g in I.generators])


def tangency_minors(I: Ideal, L: LeafDistribution, e: int, limit: int = DEFAULT_MINOR_LIMIT):
    m = len(L.fields)
    M, den = tangency_matrix(I, L)
    size = m - e + 1
    if not M:
        return [], den
    minors = all_minors(M, size, limit)
    return [squarefree_part(p) for p in minors if not p.is_zero()], den


def tangency_locus(T: TorsorSpace, L: LeafDistribution, f: FamilyOfSubvarieties, e: int,
                   limit: int = DEFAULT_MINOR_LIMIT) -> Ideal:
    """Closed locus of Z where leaf and fibre tangent spaces meet in dimension >= e."""
    _check_family(T, L, f)
    I = _squarefree_ideal(f.total_ideal)
    m = len(L.fields)
    if e <= 0:
        return I
    if e > m:
        return Ideal.unit(I.ring)
    M, den = tangency_matrix(I, L)
    if not M:
        return I
    out = I + rank_locus(M, m - e, I.ring, limit)
    if not den.is_constant():
        out = saturate(out, den)
    return out


def _check_family(T: TorsorSpace, L: LeafDistribution, f: FamilyOfSubvarieties):
    if tuple(f.ring[:len(T.ring)]) != T.ring:
        raise ValueError("family ring must start with the torsor variables")
    if L.ring != T.ring:
        raise ValueError("leaf distribution and torsor disagree on coordinates")


def generic_tangency_dim(I: Ideal, L: LeafDistribution, limit: int = DEFAULT_MINOR_LIMIT) -> int:
    """Smallest leaf/fibre tangent intersection dimension over V(I)."""
    m = len(L.fields)
    if I.is_unit():
        return m
    M, _ = tangency_matrix(I, L)
    if not M:
        return m
    for k in range(1, m + 1):
        minors = all_minors(M, k, limit)
        if all(I.vanishes_on(p) for p in minors):
            return m - (k - 1)
    return 0


def _descend(I: Ideal, L: LeafDistribution, e: int, limit: int):
    """Add rank conditions until they vanish on the locus; returns the ideal and per-stage data."""
    stages = []
    for _ in range(MAX_DESCENT_STAGES):
        if I.is_unit():
            return I, stages
        minors, den = tangency_minors(I, L, e, limit)
        pending = [p for p in minors if not I.vanishes_on(p)]
        if not pending:
            return I, stages
        new = I + pending
        if not den.is_constant():
            new = saturate(new, den)
        new = _squarefree_ideal(new)
        if I.same_ideal(new):
            raise GuardExceeded("descent did not shrink the locus")
        stages.append((max(p.total_degree() for p in pending), len(I.ring)))
        I = new
    raise GuardExceeded(f"descent exceeded {MAX_DESCENT_STAGES} stages")


def _certificate(I0: Ideal, stages) -> int:
    start = max(I0.max_degree(), 1)
    return degree_budget(start, stages=[(max(k, 1), r) for k, r in stages])


def leaf_locus(T: TorsorSpace, L: LeafDistribution, f: FamilyOfSubvarieties, e: int,
               limit: int = DEFAULT_MINOR_LIMIT, fast_closure: bool = False,
               keep: Sequence[str] | None = None) -> LocusResult:
    """Z(f,e) = {(x,y): the leaf through x meets the fibre over y in dimension >= e} and its image."""
    _check_family(T, L, f)
    if e < 0:
        raise ValueError("e must be nonnegative")
    I0 = f.total_ideal
    m = len(L.fields)
    e_f = generic_tangency_dim(_squarefree_ideal(I0), L, limit)
    if e <= e_f:
        Z, stages = I0, []
    elif e > m:
        Z, stages = Ideal.unit(I0.ring), []
    else:
        Z, stages = _descend(_squarefree_ideal(I0), L, e, limit)
        Z = groebner_basis(Z)
    if keep is None:
        keep = tuple(v for v in Z.ring if v != T.inverse_var)
    Y, closure_only = image_of(Z, keep, fast_closure)
    return LocusResult(Z, Y, e, _certificate(I0, stages), e_f, tuple(stages), closure_only)


def image_of(Z: Ideal, keep: Sequence[str], fast_closure: bool = False) -> tuple[ConstructibleSet, bool]:
    kept = tuple(v for v in Z.ring if v in set(keep))
    if Z.is_unit():
        return ConstructibleSet.empty(kept), False
    A = ConstructibleSet.closed(Z)
    if fast_closure:
        return ConstructibleSet.closed(closure_of_projection(A, kept)), True
    return cs_project(A, kept).simplify(), False


def intersect_families(f: FamilyOfSubvarieties, h: FamilyOfSubvarieties, base_vars: Sequence[str]):
    """f cap h: fibres Z_y cut by the torsor over the h-fibre, parametrized by (y, z)."""
    base_vars = tuple(base_vars)
    h_space = h.space_vars
    if set(h_space) - set(base_vars):
        raise ValueError("h must be a family of subvarieties of the base")
    clash = set(h.param_vars) & set(f.ring)
    if clash:
        raise ValueError(f"h parameter names {sorted(clash)} clash with f's ring")
    ring = f.ring + h.param_vars
    gens = [g.to_ring(ring) for g in f.total_ideal.generators] + \
           [g.to_ring(ring) for g in h.total_ideal.generators]
    total = Ideal(ring, gens)
    params = f.param_vars + h.param_vars
    chart = AffineChart(params, Ideal(params, [g.to_ring(params) for g in f.parameter_chart.ideal.generators]
                                      + [g.to_ring(params) for g in h.parameter_chart.ideal.generators]))
    return FamilyOfSubvarieties(total, params, chart, max(f.fiber_degree_bound, h.fiber_degree_bound))


def family_leaf_locus(T: TorsorSpace, L: LeafDistribution, f: FamilyOfSubvarieties, e: int,
                      h: FamilyOfSubvarieties, limit: int = DEFAULT_MINOR_LIMIT,
                      fast_closure: bool = False) -> LocusResult:
    """Points (x, y) with a germ of dimension >= e in the leaf/fibre intersection that maps into an h-fibre."""
    fh = intersect_families(f, h, T.base_vars)
    keep = tuple(v for v in f.ring if v != T.inverse_var)
    return leaf_locus(T, L, fh, e, limit, fast_closure, keep=keep)
