"""Numerical periods over real segments, used to check connection matrices independently."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath
import sympy

from .family import SuperellipticFamily
from .picard_fuchs import CyclicVectorError, cyclic_vector_ode
from .reduction import GaussManinResult, TwistedCohomology


@dataclass(frozen=True)
class PeriodCheck:
    k: int
    checked: bool
    residual: float
    reason: str = ""

    def to_json(self) -> dict:
        out = {"k": self.k, "checked": self.checked, "residual": self.residual}
        if self.reason:
            out["reason"] = self.reason
        return out


def _integrable(tc: TwistedCohomology) -> bool:
    # forms with s = 1 and a bare 1/Q pole diverge at the points of the segment
    return tc.infinity_relevant


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _order_at(expr, u, p) -> int:
    """Order of vanishing (negative for poles) of a rational function of u at u = p."""
    num, den = sympy.fraction(sympy.cancel(expr))
    out = 0
    for part, sign in ((num, 1), (den, -1)):
        P = sympy.Poly(part, u)
        lin = sympy.Poly(u - p, u)
        while not P.is_zero:
            q, r = P.div(lin)
            if not r.is_zero:
                break
            P, out = q, out + sign
    return out


def period_vector(tc: TwistedCohomology, values: Mapping, count: int | None = None) -> list:
    """Integrals of the basis forms over the segment between the two smallest relevant points."""
    u, syms = tc.u, tc.syms
    args = [_mp(values[s.name]) for s in syms]
    pts = [mpmath.mpf(sympy.lambdify(syms, p, "mpmath")(*args)) if syms else _mp(Fraction(str(p)))
           for p in tc.points]
    (a, ia), (b, ib) = sorted((p, i) for i, p in enumerate(pts))[:2]
    betas = [mpmath.mpf(bt.numerator) / bt.denominator for bt in tc.betas]
    half = (b - a) / 2
    out = []
    for A, s, _ in tc.forms[:count]:
        R = sympy.cancel(A.as_expr() / tc.Q.as_expr() ** s)

        def piece(end, idx, sign, R=R):
            # R = (u - end)^d * regular part; t = w^q with q = 1/(1 - beta + d) absorbs the singularity
            d = _order_at(R, u, tc.points[idx])
            reg = sympy.lambdify((u,) + syms, sympy.cancel(R / (u - tc.points[idx]) ** d), "mpmath")
            q = 1 / (1 - betas[idx] + d)

            def integrand(w):
                t = w ** q
                x = end + sign * t
                val = q * reg(x, *args) * sign ** d
                for j, p in enumerate(pts):
                    if j != idx:
                        val *= abs(x - p) ** (-betas[j])
                return val

            return mpmath.quad(integrand, [0, half ** (1 / q)])

        out.append(piece(a, ia, 1) + piece(b, ib, -1))
    return out


def check_eigenspace(result: GaussManinResult, k: int, values: Mapping, dps: int = 30) -> PeriodCheck:
    """max over directions of |d(pi) - A pi| / max(1, |d(pi)|) at one parameter value."""
    fam = result.family
    if k not in result.connections:
        return PeriodCheck(k, False, 0.0, "eigenspace has rank 0")
    tc = TwistedCohomology(fam, k)
    if not _integrable(tc):
        if tc.holomorphic_count() == 0:
            return PeriodCheck(k, False, 0.0, "basis contains second-kind forms that diverge on real segments")
        return _check_first_period_ode(result, tc, k, values, dps)
    conn = result.connections[k]
    worst = mpmath.mpf(0)
    point = {n: Fraction(v) for n, v in values.items()}
    with mpmath.workdps(dps):
        base = period_vector(tc, point)
        for i, x in enumerate(fam.params):
            def pi_at(t, x=x):
                vals = {n: _mp(v) for n, v in point.items()}
                vals[x] = t
                return period_vector(tc, vals)

            deriv = _stencil(pi_at, _mp(point[x]))
            A = [[a.evaluate(point) for a in row] for row in conn.matrix(i)]
            for j in range(conn.rank):
                pred = sum(_mp(A[j][l]) * base[l] for l in range(conn.rank))
                worst = max(worst, abs(deriv[j] - pred) / max(1, abs(deriv[j])))
    return PeriodCheck(k, True, float(worst))


def _check_first_period_ode(result, tc, k, values, dps) -> PeriodCheck:
    """Only the first (holomorphic) form is integrable: test its scalar ODE along each direction."""
    conn = result.connections[k]
    point = {n: Fraction(v) for n, v in values.items()}
    worst = mpmath.mpf(0)
    with mpmath.workdps(dps):
        for i, x in enumerate(tc.fam.params):
            try:
                ode = cyclic_vector_ode(conn, i, first_only=True)
            except CyclicVectorError:
                return PeriodCheck(k, False, 0.0, "first basis vector is not cyclic")
            coeffs = [_mp(a.evaluate(point)) for a in ode]

            def first(t, x=x):
                vals = {n: _mp(v) for n, v in point.items()}
                vals[x] = t
                return period_vector(tc, vals, count=1)[0]

            derivs = [mpmath.diff(first, _mp(point[x]), n) for n in range(len(coeffs))]
            terms = [a * d for a, d in zip(coeffs, derivs)]
            worst = max(worst, abs(sum(terms)) / max(1, max(abs(t) for t in terms)))
    return PeriodCheck(k, True, float(worst), "scalar equation of the first period")


def _stencil(f, x0):
    """Fourth-order central difference of a vector-valued function."""
    h = mpmath.mpf(10) ** (-(mpmath.mp.dps // 4))
    fp1, fm1, fp2, fm2 = f(x0 + h), f(x0 - h), f(x0 + 2 * h), f(x0 - 2 * h)
    return [(8 * (a - b) - (c - d)) / (12 * h) for a, b, c, d in zip(fp1, fm1, fp2, fm2)]


def verify_periods(result: GaussManinResult, points: int = 1, seed: int = 0, dps: int = 30) -> dict:
    """Numeric check of every eigenspace connection at seeded rational parameter values."""
    fam: SuperellipticFamily = result.family
    samples = sample_points(fam, points, seed)
    report, done = [], []
    for values in samples:
        checks = [check_eigenspace(result, k, values, dps) for k in sorted(result.bases)]
        done.extend(c.residual for c in checks if c.checked)
        report.append({"point": {k: str(v) for k, v in values.items()},
                       "eigenspaces": [c.to_json() for c in checks]})
    return {"max_residual": max(done) if done else None, "samples": report}


def sample_points(fam: SuperellipticFamily, count: int, seed: int = 0) -> list[dict]:
    """Seeded rational parameter values with pairwise distinct branch points."""
    rng = random.Random(seed)
    polys = fam.point_polys()
    out = []
    while len(out) < count:
        vals = {v: Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for v in fam.params}
        pts = [p.evaluate(vals) if fam.params else p.constant_value() for p in polys]
        if len(set(pts)) == len(pts):
            out.append(vals)
        if not fam.params:
            break
    return out
