"""Independent checks shared by the module tests and the acceptance run."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from leafcut.algebra import GREVLEX, Ideal, Poly, eliminate, groebner_basis, ideal_dimension, saturate
from leafcut.algebra.ideal import monomial_dimension

RING3 = ("x", "y", "z")


def random_poly(rng: random.Random, ring, max_deg=2, terms=3, coeff=5) -> Poly:
    out = {}
    for _ in range(terms):
        e = [0] * len(ring)
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(len(ring))] += 1
        c = rng.randint(-coeff, coeff)
        if c:
            out[tuple(e)] = out.get(tuple(e), 0) + c
    p = Poly(ring, out)
    return p if not p.is_zero() else Poly.var(ring, ring[0]) - 1


def random_ideal(rng, ring=RING3, gens=None, max_deg=2) -> Ideal:
    gens = gens or rng.randint(1, 3)
    return Ideal(ring, [random_poly(rng, ring, max_deg) for _ in range(gens)])


def to_sympy_expr(p: Poly, syms):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** k for s, k in zip(syms, e)])
               for e, c in p.terms.items())


def sympy_reduced_basis(I: Ideal) -> set:
    syms = sympy.symbols(I.ring)
    G = sympy.groebner([to_sympy_expr(g, syms) for g in I.generators], *syms, order="grevlex", domain=sympy.QQ)
    return {sympy.expand(g / sympy.Poly(g, *syms).LC(order="grevlex")) for g in G.exprs}


def ours_as_sympy(G: Ideal) -> set:
    syms = sympy.symbols(G.ring)
    return {sympy.expand(to_sympy_expr(g, syms)) for g in G.generators}


# kernel suite ----------------------------------------------------------------

def case_determinism(rng) -> bool:
    I = random_ideal(rng)
    gens = list(I.generators)
    rng.shuffle(gens)
    extra = random_poly(rng, I.ring) * gens[0]
    J = Ideal(I.ring, gens + [extra + gens[-1]])
    G = groebner_basis(I)
    return G.serialize() == groebner_basis(J).serialize() and ours_as_sympy(G) == sympy_reduced_basis(I)


def case_membership(rng) -> bool:
    I = random_ideal(rng)
    combo = Poly.zero(I.ring)
    for g in I.generators:
        combo = combo + random_poly(rng, I.ring, 2) * g
    if not I.contains(combo):
        return False
    q = random_poly(rng, I.ring, 3, 5)
    G = groebner_basis(I)
    from leafcut.algebra import normal_form
    r = normal_form(q, G)
    leads = [g.leading_term(GREVLEX)[0] for g in G.generators]
    reduced = all(not all(a >= b for a, b in zip(e, lm)) for e in r.terms for lm in leads)
    return I.contains(q - r) and reduced


def case_elimination(rng) -> bool:
    ring = ("t", "x", "y")
    f = random_poly(rng, ("t",), 3, 3)
    g = random_poly(rng, ("t",), 3, 3)
    if f.is_constant():
        f = f + Poly.var(("t",), "t")
    T, X, Y = Poly.gens(ring)
    I = Ideal(ring, [X - f.to_ring(ring), Y - g.to_ring(ring)])
    E = eliminate(I, ("x", "y"))
    if not all(I.contains(e.to_ring(ring)) for e in E.generators):
        return False
    for _ in range(4):
        t0 = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        pt = (f.evaluate((t0,)), g.evaluate((t0,)))
        if any(e.evaluate(pt) != 0 for e in E.generators):
            return False
    # the image of a nonconstant curve is a plane curve, so something survives elimination
    return not E.is_zero()


def case_saturation(rng) -> bool:
    I = random_ideal(rng)
    g = random_poly(rng, I.ring, 1, 2)
    if g.is_constant():
        g = Poly.var(I.ring, "x")
    S = saturate(I, g)
    return S.same_ideal(saturate(S, g)) and S.contains_ideal(I)


def case_monomial_dimension(rng) -> bool:
    n = rng.randint(1, 4)
    ring = tuple(f"v{i}" for i in range(n))
    mons = []
    for _ in range(rng.randint(1, 4)):
        e = tuple(rng.choice([0, 0, 1, 2]) for _ in range(n))
        mons.append(e)
    I = Ideal(ring, [Poly(ring, {e: 1}) for e in mons])
    # brute force: the largest coordinate subspace on which every generator vanishes
    best = -1
    for size in range(n + 1):
        for S in itertools.combinations(range(n), size):
            pt = tuple(1 if i in S else 0 for i in range(n))
            if all(g.evaluate(pt) == 0 for g in I.generators):
                best = max(best, size)
    got = ideal_dimension(I)
    got = -1 if got == "empty" else got
    return got == best == monomial_dimension(mons, n)


KERNEL_CASES = {
    "determinism": case_determinism,
    "membership": case_membership,
    "elimination": case_elimination,
    "saturation": case_saturation,
    "monomial_dimension": case_monomial_dimension,
}


def run_kernel_suite(per_law: int = 100, seed: int = 2024) -> dict:
    out = {}
    for name, fn in KERNEL_CASES.items():
        rng = random.Random(f"{seed}-{name}")
        fails = [i for i in range(per_law) if not fn(rng)]
        out[name] = (per_law, fails)
    return out
