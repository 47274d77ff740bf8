"""Connections on trivial bundles, their tensor constructions, and the frame torsor.

Convention: the connection is d - sum_i A_i ds_i, so flat sections satisfy
d sigma/ds_i = A_i sigma, and the curvature in directions i, j is
dA_j/ds_i - dA_i/ds_j - [A_i, A_j].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .algebra import Ideal, Poly, RationalFunction, ideal_dimension, rank_locus, saturate
from .algebra.ideal import _fresh
from .algebra.ratfunc import poly_lcm
from .geometry import AffineChart

Matrix = list[list[RationalFunction]]


def _zero_matrix(vars, n, m=None) -> Matrix:
    m = n if m is None else m
    z = RationalFunction.const(vars, 0)
    return [[z] * m for _ in range(n)]


def identity(vars, n) -> Matrix:
    M = _zero_matrix(vars, n)
    one = RationalFunction.const(vars, 1)
    for i in range(n):
        M[i] = list(M[i])
        M[i][i] = one
    return M


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                if A[i][t].is_zero() or B[t][j].is_zero():
                    continue
                term = A[i][t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else RationalFunction.const(A[0][0].vars, 0))
        out.append(row)
    return out


def matadd(A: Matrix, B: Matrix, sign: int = 1) -> Matrix:
    return [[a + b if sign > 0 else a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def kron(A: Matrix, B: Matrix) -> Matrix:
    out = []
    for ra in A:
        for rb in B:
            out.append([a * b for a in ra for b in rb])
    return out


def matdiff(A: Matrix, name: str) -> Matrix:
    return [[a.diff(name) for a in r] for r in A]


def matvec(A: Matrix, v: Sequence[RationalFunction]) -> list[RationalFunction]:
    return [row[0] for row in matmul(A, [[x] for x in v])]


def _clear(entries: Sequence[RationalFunction]) -> list[Poly]:
    return [e.num for e in entries if not e.is_zero()]


@dataclass(frozen=True)
class ConnectionData:
    base: AffineChart
    rank: int
    matrices: tuple

    def __post_init__(self):
        mats = tuple(tuple(tuple(r) for r in M) for M in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != len(self.base.vars):
            raise ValueError(f"{len(mats)} matrices for {len(self.base.vars)} base directions")
        for M in mats:
            if len(M) != self.rank or any(len(r) != self.rank for r in M):
                raise ValueError("connection matrices must be square of size rank")
            for r in M:
                for a in r:
                    if a.vars != self.base.vars:
                        raise ValueError("matrix entry over the wrong ring")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.base.vars

    @property
    def singular_denominator(self) -> Poly:
        den = Poly.const(self.vars, 1)
        for M in self.matrices:
            for r in M:
                for a in r:
                    if not a.den.is_constant():
                        den = poly_lcm(den, a.den)
        return den

    def matrix(self, i: int) -> Matrix:
        return [list(r) for r in self.matrices[i]]

    def regular_ideal(self) -> Ideal:
        """Base ideal with the singular locus saturated away."""
        den = self.singular_denominator
        if den.is_constant():
            return self.base.ideal
        return saturate(self.base.ideal, den)

    def restrict(self, i: int) -> "ConnectionData":
        """One-direction connection over the line of the i-th base variable (others must be absent)."""
        v = self.vars[i]
        chart = AffineChart.affine_space((v,))
        M = [[a.to_ring((v,)) for a in r] for r in self.matrices[i]]
        return ConnectionData(chart, self.rank, (M,))

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "base": self.base.to_json(),
            "matrices": [[[a.serialize() for a in r] for r in M] for M in self.matrices],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ConnectionData":
        base = AffineChart.from_json(data["base"])

        def entry(x):
            if isinstance(x, (str, int)):
                return RationalFunction.parse(str(x), "1", base.vars)
            num, den = x
            return RationalFunction.parse(str(num), str(den), base.vars)

        mats = [[[entry(x) for x in r] for r in M] for M in data["matrices"]]
        return cls(base, int(data["rank"]), mats)


def vanishes_on_base(c: ConnectionData, values: Sequence[RationalFunction], J: Ideal | None = None) -> bool:
    J = c.regular_ideal() if J is None else J
    return all(J.contains(p) for p in _clear(values))


def curvature(c: ConnectionData) -> tuple[dict, bool]:
    """Curvature matrices keyed by direction pairs (i, j), i < j, and the flatness verdict."""
    out = {}
    J = c.regular_ideal()
    flat = True
    for i, j in itertools.combinations(range(len(c.vars)), 2):
        Ai, Aj = c.matrix(i), c.matrix(j)
        F = matadd(matdiff(Aj, c.vars[i]), matdiff(Ai, c.vars[j]), -1)
        F = matadd(F, matadd(matmul(Ai, Aj), matmul(Aj, Ai), -1), -1)
        out[(i, j)] = F
        if flat and not vanishes_on_base(c, [a for r in F for a in r], J):
            flat = False
    return out, flat


def is_flat(c: ConnectionData) -> bool:
    return curvature(c)[1]


def curvature_nonzero_entries(c: ConnectionData) -> list[dict]:
    F, _ = curvature(c)
    J = c.regular_ideal()
    out = []
    for (i, j), M in sorted(F.items()):
        for p, row in enumerate(M):
            for q, a in enumerate(row):
                if not a.is_zero() and not J.contains(a.num):
                    out.append({"directions": [i, j], "entry": [p, q], "value": a.serialize()})
    return out


def tensor_connection(c: ConnectionData, a: int, b: int) -> ConnectionData:
    """Induced connection on H^{(x)a} (x) (H*)^{(x)b}, coordinates in Kronecker (row-major) order."""
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 with a + b >= 1")
    r = c.rank
    mats = []
    for i in range(len(c.vars)):
        A = c.matrix(i)
        dual = [[-x for x in row] for row in transpose(A)]
        factors = [A] * a + [dual] * b
        I = identity(c.vars, r)
        total = None
        for k in range(a + b):
            term = reduce(kron, [factors[t] if t == k else I for t in range(a + b)])
            total = term if total is None else matadd(total, term)
        mats.append(total)
    return ConnectionData(c.base, r ** (a + b), mats)


def flat_section_check(c: ConnectionData, sigma: Sequence[RationalFunction]) -> bool:
    if len(sigma) != c.rank:
        raise ValueError("section length differs from the rank")
    J = c.regular_ideal()
    for i, v in enumerate(c.vars):
        lhs = [s.diff(v) for s in sigma]
        rhs = matvec(c.matrix(i), sigma)
        if not vanishes_on_base(c, [x - y for x, y in zip(lhs, rhs)], J):
            return False
    return True


def tensor_product_section(x: Sequence[RationalFunction], y: Sequence[RationalFunction]) -> list[RationalFunction]:
    return [p * q for p in x for q in y]


@dataclass(frozen=True)
class InvariantTensor:
    """A flat section of H^{(x)a} (x) (H*)^{(x)b}; constants give constant sections."""

    a: int
    b: int
    section: tuple

    def __post_init__(self):
        object.__setattr__(self, "section", tuple(self.section))


@dataclass(frozen=True)
class TorsorSpace:
    base_chart: AffineChart
    frame_vars: tuple
    inverse_var: str
    constraint_ideal: Ideal
    group_dimension: int
    base_point: tuple = ()

    @property
    def ring(self) -> tuple[str, ...]:
        return self.constraint_ideal.ring

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.base_chart.vars

    @property
    def flat_frame_vars(self) -> tuple[str, ...]:
        return tuple(v for row in self.frame_vars for v in row)

    def fibre_ideal(self, point: Sequence) -> Ideal:
        """Constraint ideal restricted to the fibre over a base point, in (frame, inverse) variables."""
        fibre_ring = self.flat_frame_vars + (self.inverse_var,)
        vals = {v: Fraction(x) for v, x in zip(self.base_vars, point)}
        return Ideal(fibre_ring, [g.subs(vals, fibre_ring) for g in self.constraint_ideal.generators])


@dataclass(frozen=True)
class LeafDistribution:
    ring: tuple
    fields: tuple = field(default_factory=tuple)

    def matrix(self) -> Matrix:
        """Columns are the spanning fields."""
        return transpose([list(f) for f in self.fields])


def _det(M: list[list[Poly]]) -> Poly:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        term = term if j % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else Poly.zero(M[0][0].vars)


def _adjugate(M: list[list[Poly]]) -> list[list[Poly]]:
    n = len(M)
    if n == 1:
        return [[Poly.const(M[0][0].vars, 1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            d = _det(minor)
            adj[j][i] = d if (i + j) % 2 == 0 else -d
    return adj


def _poly_kron(A, B):
    return [[x * y for x in ra for y in rb] for ra in A for rb in B]


def frame_variable_names(base_vars: Sequence[str], rank: int) -> tuple[tuple, str]:
    """Frame entry names b{j}_{k} (rows) and the inverse-determinant name, avoiding base names."""
    taken = set(base_vars)
    names = []
    for j in range(1, rank + 1):
        row = []
        for k in range(1, rank + 1):
            v = _fresh(f"b{j}_{k}", taken)
            taken.add(v)
            row.append(v)
        names.append(tuple(row))
    return tuple(names), _fresh("dinv", taken)


def torsor_ring(base_vars: Sequence[str], rank: int) -> tuple[str, ...]:
    names, inv = frame_variable_names(base_vars, rank)
    return tuple(base_vars) + tuple(v for row in names for v in row) + (inv,)


def frame_torsor(c: ConnectionData, invariant_tensors: Sequence[InvariantTensor] = (),
                 base_point: Sequence | None = None, group_dimension: int | None = None,
                 check: bool = True) -> tuple[TorsorSpace, LeafDistribution]:
    """Frames beta carrying each invariant tensor at s to its value at the base point.

    Frame variables are b{j}_{k}; invertibility is an auxiliary variable times
    det(beta) = 1.  Leaf fields move beta by -beta A_i along ds_i.
    """
    base = c.base
    r = c.rank
    names, inv = frame_variable_names(base.vars, r)
    flat_names = tuple(v for row in names for v in row)
    ring = base.vars + flat_names + (inv,)
    beta = [[Poly.var(ring, v) for v in row] for row in names]
    dinv = Poly.var(ring, inv)
    det = _det(beta)

    if base_point is None:
        base_point = _default_base_point(c)
    base_point = tuple(Fraction(x) for x in base_point)

    gens = [g.to_ring(ring) for g in base.ideal.generators]
    gens.append(dinv * det - 1)
    if invariant_tensors:
        beta_inv_t = [[x * dinv for x in row] for row in _transpose_poly(_adjugate(beta))]
    for T in invariant_tensors:
        dim = r ** (T.a + T.b)
        section = [x if isinstance(x, RationalFunction) else RationalFunction.const(base.vars, x)
                   for x in T.section]
        if len(section) != dim:
            raise ValueError(f"tensor of type ({T.a},{T.b}) needs {dim} components")
        if check and not flat_section_check(tensor_connection(c, T.a, T.b), section):
            raise ValueError(f"declared invariant tensor of type ({T.a},{T.b}) is not flat")
        rho = reduce(_poly_kron, [beta] * T.a + [beta_inv_t] * T.b)
        at_base = [x.evaluate(base_point) for x in section]
        den = Poly.const(base.vars, 1)
        for x in section:
            den = poly_lcm(den, x.den) if not x.den.is_constant() else den
        cleared = [(x * RationalFunction(den)).num.to_ring(ring) for x in section]
        den_r = den.to_ring(ring)
        for row, target in zip(rho, at_base):
            lhs = None
            for coeff, comp in zip(row, cleared):
                if coeff.is_zero() or comp.is_zero():
                    continue
                t = coeff * comp
                lhs = t if lhs is None else lhs + t
            lhs = lhs if lhs is not None else Poly.zero(ring)
            gens.append(lhs - den_r * target)
    constraint = Ideal(ring, gens)

    if group_dimension is None:
        sat = constraint
        den = c.singular_denominator
        if not den.is_constant():
            sat = saturate(constraint, den.to_ring(ring))
        total = ideal_dimension(sat)
        below = ideal_dimension(base.ideal)
        if total == "empty" or below == "empty":
            raise ValueError("torsor is empty")
        group_dimension = total - below

    fields = []
    for i, s in enumerate(base.vars):
        A = [[a.to_ring(ring) for a in row] for row in c.matrix(i)]
        field_ = [RationalFunction.const(ring, 1 if v == s else 0) for v in base.vars]
        B = [[RationalFunction(x) for x in row] for row in beta]
        move = matmul(B, A)
        field_ += [-move[j][k] for j in range(r) for k in range(r)]
        trace = reduce(lambda x, y: x + y, [A[j][j] for j in range(r)])
        field_.append(RationalFunction(dinv) * trace)
        fields.append(tuple(field_))

    T = TorsorSpace(base, tuple(names), inv, constraint, int(group_dimension), base_point)
    return T, LeafDistribution(ring, tuple(fields))


def _transpose_poly(M):
    return [list(r) for r in zip(*M)]


def _default_base_point(c: ConnectionData) -> tuple:
    """First small integer point off the singular locus (base ideal ignored if nonzero)."""
    den = c.singular_denominator
    n = len(c.vars)
    for bound in range(0, 6):
        for pt in itertools.product(range(-bound, bound + 1), repeat=n):
            if max((abs(x) for x in pt), default=0) != bound:
                continue
            if den.evaluate(pt) != 0 and all(g.evaluate(pt) == 0 for g in c.base.ideal.generators):
                return pt
    return (0,) * n


def lie_bracket(X: Sequence[RationalFunction], Y: Sequence[RationalFunction], ring: Sequence[str]):
    out = []
    for k in range(len(ring)):
        acc = RationalFunction.const(ring, 0)
        for j, v in enumerate(ring):
            if not X[j].is_zero():
                acc = acc + X[j] * Y[k].diff(v)
            if not Y[j].is_zero():
                acc = acc - Y[j] * X[k].diff(v)
        out.append(acc)
    return out


def is_involutive(T: TorsorSpace, L: LeafDistribution) -> bool:
    """Every bracket of spanning fields lies in their span modulo the constraint ideal."""
    m = len(L.fields)
    if m < 2:
        return True
    J = T.constraint_ideal
    for i, j in itertools.combinations(range(m), 2):
        br = lie_bracket(L.fields[i], L.fields[j], L.ring)
        cols = [list(f) for f in L.fields] + [br]
        den = Poly.const(L.ring, 1)
        for col in cols:
            for x in col:
                if not x.den.is_constant():
                    den = poly_lcm(den, x.den)
        M = [[(cols[q][p] * RationalFunction(den)).num for q in range(m + 1)] for p in range(len(L.ring))]
        minors = rank_locus(M, m, L.ring)
        Jsat = J if den.is_constant() else saturate(J, den)
        if not Jsat.contains_ideal(minors):
            return False
    return True
