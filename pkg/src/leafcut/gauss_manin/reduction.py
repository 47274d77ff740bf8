"""Gauss-Manin connections of cyclic covers by pole reduction in twisted de Rham cohomology.

The k-th eigenspace of H^1 is identified with twisted cohomology of the line
with twist Psi = prod (u - p)^(-beta_p) over the points where k*a_p is not
divisible by N.  Forms are pairs (A, s) meaning A(u) / Q(u)^s * Psi du with
Q = prod (u - p).  Exact forms d(g Psi) = (g' - g L/Q) Psi du let us lower s
to 1 and then the degree of A.

When infinity is not a branch point of the eigenspace the twist is gauged by
(u - p_1)^T (T the exponent sum) so that Psi is regular at infinity; forms are
then kept regular there and one extra exact relation, d(Psi), survives.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import sympy
from sympy.polys.matrices import DomainMatrix

from ..algebra import Poly, RationalFunction
from ..connection import ConnectionData
from ..geometry import AffineChart
from .family import SuperellipticFamily, genus

MAX_POLE_STEPS = 10_000


class ReductionError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenspaceBasis:
    k: int
    forms: tuple
    rank: int
    holomorphic: int

    def to_json(self) -> dict:
        return {"k": self.k, "rank": self.rank, "forms": list(self.forms), "holomorphic": self.holomorphic}


@dataclass
class GaussManinResult:
    family: SuperellipticFamily
    genus: int
    bases: dict
    connections: dict
    hodge_sub: dict
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        spaces = []
        for k in sorted(self.bases):
            cd = self.connections.get(k)
            spaces.append({
                "k": k,
                "basis": self.bases[k].to_json(),
                "hodge_sub": self.hodge_sub[k],
                "connection": cd.to_json() if cd is not None else None,
            })
        return {"genus": self.genus, "params": list(self.family.params), "eigenspaces": spaces,
                "checks": self.meta}


class TwistedCohomology:
    """Pole/degree reduction for the k-th eigenspace of a superelliptic family."""

    def __init__(self, fam: SuperellipticFamily, k: int):
        self.fam = fam
        self.k = k
        self.u = sympy.Dummy("u")
        self.syms = fam.symbols()
        self.K = sympy.QQ.frac_field(*self.syms) if self.syms else sympy.QQ
        fin, inf = fam.relevant(k)
        pts = fam.point_exprs()
        self.points = [pts[i] for i in fin]
        alphas = [Fraction(k * fam.exponents[i] % fam.N, fam.N) for i in fin]
        self.alphas = alphas
        self.T = sum(alphas, Fraction(0))
        self.infinity_relevant = inf
        self.m = len(self.points)
        self.rank = fam.eigenspace_rank(k)
        betas = list(alphas)
        self.gauge = 0
        if not inf and self.m:
            # T is an integer here; gauge the first point so the twist is regular at infinity
            self.gauge = int(self.T)
            betas[0] = betas[0] - self.T
        self.betas = betas
        u = self.u
        self.linear = [self.poly(u - p) for p in self.points]
        Q = self.poly(1)
        for f in self.linear:
            Q = Q * f
        self.Q = Q
        self.dQ = Q.diff(u)
        L = self.poly(0)
        for b, f in zip(betas, self.linear):
            L = L + self.const(b) * Q.exquo(f)
        self.L = L
        if self.rank > 0:
            self._setup_basis()

    def poly(self, expr) -> sympy.Poly:
        return sympy.Poly(expr, self.u, domain=self.K)

    def const(self, c) -> sympy.Poly:
        if isinstance(c, Fraction):
            c = sympy.Rational(c.numerator, c.denominator)
        return self.poly(c)

    # reduction -----------------------------------------------------------

    def _lower_pole(self, A: sympy.Poly, s: int) -> tuple[sympy.Poly, int]:
        C = -(self.const(s - 1) * self.dQ + self.L)
        S, Tc, h = self.Q.gcdex(C)
        if h.degree() != 0:
            raise ReductionError("Q and the reduction polynomial share a root")
        Tc = Tc.quo(h)
        a = (A * Tc).rem(self.Q)
        B = (A - a * C).exquo(self.Q)
        return B - a.diff(self.u), s - 1

    def _lower_degree(self, A: sympy.Poly) -> sympy.Poly:
        # d(u^t Psi) has numerator t u^(t-1) Q - u^t L, leading coefficient t - T in degree t + m - 1
        u, m = self.u, self.m
        for _ in range(MAX_POLE_STEPS):
            if A.is_zero or A.degree() < m - 1:
                return A
            t = A.degree() - (m - 1)
            R = -self.poly(u ** t) * self.L
            if t:
                R = R + self.const(t) * self.poly(u ** (t - 1)) * self.Q
            A = A - R.mul_ground(A.LC() / R.LC())
        raise ReductionError("degree reduction did not terminate")

    def coords(self, A: sympy.Poly, s: int) -> list:
        """Coordinates of A/Q^s Psi du in the classes u^i/Q Psi du, i = 0..m-2."""
        steps = 0
        while s >= 2:
            A, s = self._lower_pole(A, s)
            steps += 1
            if steps > MAX_POLE_STEPS:
                raise ReductionError("pole reduction did not terminate")
        if s <= 0:
            A = A * self.Q ** (1 - s) if s < 0 else A * self.Q
            s = 1
        if self.infinity_relevant:
            A = self._lower_degree(A)
        elif not A.is_zero and A.degree() > self.m - 2:
            raise ReductionError("form is not regular at infinity")
        out = [self.K.zero] * (self.m - 1)
        if not A.is_zero:
            for (d,), c in A.terms():
                out[d] = self.K.from_sympy(c)
        return out

    # basis -----------------------------------------------------------------

    def holomorphic_count(self) -> int:
        T = self.T
        h = math.ceil(T) - 1 if T.denominator != 1 else int(T) - 1
        return max(min(h, self.rank), 0)

    def _setup_basis(self):
        u, m = self.u, self.m
        n = m - 1
        forms = []  # (A, s, label)
        if self.infinity_relevant:
            for j in range(n):
                forms.append((self.poly(u ** j) * self.Q, 1, ("poly", j)))
            rows = [self.coords(A, s) for A, s, _ in forms]
            self.relation = None
        else:
            p1 = self.linear[0]
            cofactor = self.Q.exquo(p1)
            h = self.holomorphic_count()
            for j in range(h):
                forms.append((self.poly(u ** j) * cofactor ** self.gauge, self.gauge, ("poly", j)))
            self.relation = self.coords(self.L, 1)
            rows = [self.coords(A, s) for A, s, _ in forms]
            for i in range(n):
                if len(forms) == self.rank:
                    break
                cand = self.coords(self.poly(u ** i), 1)
                trial = rows + [cand, self.relation]
                if _rank(trial, self.K) == len(trial):
                    forms.append((self.poly(u ** i), 1, ("pole", i)))
                    rows.append(cand)
            if len(forms) != self.rank:
                raise ReductionError("could not complete an eigenspace basis")
        self.forms = forms
        square = rows + ([self.relation] if self.relation is not None else [])
        M = DomainMatrix([list(r) for r in square], (n, n), self.K)
        self.inverse = M.inv()

    def basis_coords(self, A: sympy.Poly, s: int) -> list:
        c = self.coords(A, s)
        row = DomainMatrix([c], (1, self.m - 1), self.K)
        return (row * self.inverse).to_list()[0][: self.rank]

    def derivative(self, A: sympy.Poly, s: int, x) -> tuple[sympy.Poly, int]:
        """d/dx of A/Q^s Psi du as a form over Q^(s+1)."""
        dA = _coeff_diff(A, x, self)
        dQ = _coeff_diff(self.Q, x, self)
        extra = self.poly(0)
        for b, p, f in zip(self.betas, self.points, self.linear):
            dp = sympy.diff(p, x)
            if dp != 0:
                extra = extra + self.const(b) * self.poly(dp) * self.Q.exquo(f)
        new = dA * self.Q - self.const(s) * A * dQ + A * extra
        return new, s + 1

    def connection_matrices(self) -> list[list[list]]:
        mats = []
        for x in self.syms:
            C = []
            for A, s, _ in self.forms:
                dA, ds = self.derivative(A, s, x)
                C.append(self.basis_coords(dA, ds))
            mats.append(C)
        return mats

    def form_labels(self) -> list[dict]:
        """Each basis form as R(u) du / v^k, with R written as numerator/denominator in u."""
        u = self.u
        fam = self.fam
        pts = fam.point_exprs()
        # u^j Psi du = u^j * prod (u-p)^(floor(k a_p / N)) * gauge / Q^s ... du / v^k
        base_factor = sympy.Integer(1)
        for a, p in zip(fam.exponents, pts):
            base_factor *= (u - p) ** ((self.k * a) // fam.N)
        if self.gauge:
            base_factor *= (u - self.points[0]) ** self.gauge
        labels = []
        for A, s, (kind, j) in self.forms:
            R = sympy.factor(A.as_expr() * base_factor / self.Q.as_expr() ** s)
            num, den = sympy.fraction(sympy.together(R))
            labels.append({
                "kind": "polynomial" if kind == "poly" else "second_kind",
                "j": j,
                "numerator": _u_text(sympy.expand(num), u),
                "denominator": _u_text(sympy.expand(den), u),
            })
        return labels


def _rank(rows, K) -> int:
    if not rows:
        return 0
    M = DomainMatrix([list(r) for r in rows], (len(rows), len(rows[0])), K)
    return M.rank()


def _coeff_diff(P: sympy.Poly, x, tc: TwistedCohomology) -> sympy.Poly:
    expr = sympy.diff(P.as_expr(), x)
    return tc.poly(expr)


def _u_text(expr, u) -> str:
    return str(expr.subs(u, sympy.Symbol("u"))).replace("**", "^")


def _to_rational_function(c, K, syms, vars) -> RationalFunction:
    expr = K.to_sympy(c) if hasattr(K, "to_sympy") else c
    num, den = sympy.fraction(sympy.together(expr))
    return RationalFunction(_sympy_to_poly(num, syms, vars), _sympy_to_poly(den, syms, vars))


def _sympy_to_poly(expr, syms, vars) -> Poly:
    if not syms:
        r = sympy.Rational(expr)
        return Poly.const(vars, Fraction(int(r.p), int(r.q)))
    P = sympy.Poly(expr, *syms, domain=sympy.QQ)
    terms = {}
    for e, c in P.terms():
        r = sympy.Rational(c)
        terms[tuple(e)] = Fraction(int(r.p), int(r.q))
    return Poly(vars, terms)


def eigenspace_basis(fam: SuperellipticFamily, k: int) -> EigenspaceBasis:
    if not 1 <= k <= fam.N - 1:
        raise ValueError("character index k must lie in 1..N-1")
    tc = TwistedCohomology(fam, k)
    if tc.rank == 0:
        return EigenspaceBasis(k, (), 0, 0)
    return EigenspaceBasis(k, tuple(tc.form_labels()), tc.rank, tc.holomorphic_count())


def _eigenspace_job(fam: SuperellipticFamily, k: int):
    tc = TwistedCohomology(fam, k)
    if tc.rank == 0:
        return EigenspaceBasis(k, (), 0, 0), [], None
    basis = EigenspaceBasis(k, tuple(tc.form_labels()), tc.rank, tc.holomorphic_count())
    vars = fam.params
    mats = [[[_to_rational_function(c, tc.K, tc.syms, vars) for c in row] for row in C]
            for C in tc.connection_matrices()]
    return basis, list(range(tc.holomorphic_count())), mats


def gauss_manin(fam: SuperellipticFamily, characters=None, workers: int = 1) -> GaussManinResult:
    """Per-eigenspace connection matrices A_i with d(periods)/dx_i = A_i * periods."""
    fam.validate()
    g = genus(fam)
    chart = AffineChart.affine_space(fam.params)
    ks = sorted(range(1, fam.N) if characters is None else set(characters))
    for k in ks:
        if not 1 <= k <= fam.N - 1:
            raise ValueError("character index k must lie in 1..N-1")
    if workers > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = list(pool.map(_eigenspace_job, [fam] * len(ks), ks))
    else:
        jobs = [_eigenspace_job(fam, k) for k in ks]
    bases, conns, hodge = {}, {}, {}
    for k, (basis, hol, mats) in zip(ks, jobs):
        bases[k] = basis
        hodge[k] = hol
        if mats is not None:
            conns[k] = ConnectionData(chart, basis.rank, mats)
    meta = {
        "rank_total": sum(b.rank for b in bases.values()),
        "hodge_total": sum(len(h) for h in hodge.values()),
        "weight_sum": str(sum(fam.weights)),
    }
    if sum(fam.weights) == 2 and 1 in bases:
        # unit-sum weights: the standard character carries a (params + 1)-dimensional system
        meta["standard_rank_expected"] = len(fam.params) + 1
        meta["standard_rank_ok"] = bases[1].rank == len(fam.params) + 1
    return GaussManinResult(fam, g, bases, conns, hodge, meta)


def transversality_block(result: GaussManinResult, k: int) -> list:
    """Entries of each A_i mapping the holomorphic forms to the remaining ones."""
    if k not in result.connections:
        return []
    h = len(result.hodge_sub[k])
    out = []
    for i in range(len(result.family.params)):
        M = result.connections[k].matrix(i)
        out.append([[M[a][b] for b in range(h, len(M))] for a in range(h)])
    return out
