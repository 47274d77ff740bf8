"""Buchberger's algorithm with the sugar strategy and Gebauer-Moeller pair pruning.

Works on raw term dictionaries ``{exponent: Fraction}``; the public wrappers in
:mod:`leafcut.algebra.ideal` convert to and from :class:`Poly`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .poly import GREVLEX, MonomialOrder, Poly, RingMismatch, common_ring

Terms = dict


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _monic(p: Terms, key) -> tuple[tuple, Terms]:
    lm = max(p, key=key)
    c = p[lm]
    if c != 1:
        inv = 1 / c
        p = {e: v * inv for e, v in p.items()}
    return lm, p


def reduce_terms(p: Terms, basis: Sequence[tuple[tuple, Terms]], key, full: bool = True) -> Terms:
    """Remainder of ``p`` on division by monic ``basis`` entries ``(lm, terms)``."""
    p = dict(p)
    rem: Terms = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for g_lm, g in basis:
            if _divides(g_lm, m):
                q = tuple(x - y for x, y in zip(m, g_lm))
                for gm, gc in g.items():
                    mm = tuple(x + y for x, y in zip(gm, q))
                    v = p.get(mm, 0) - c * gc
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
    return rem


def _spoly(f_lm, f, g_lm, g):
    lcm = _lcm(f_lm, g_lm)
    qf = tuple(x - y for x, y in zip(lcm, f_lm))
    qg = tuple(x - y for x, y in zip(lcm, g_lm))
    out: Terms = {}
    for e, c in f.items():
        out[tuple(x + y for x, y in zip(e, qf))] = c
    for e, c in g.items():
        mm = tuple(x + y for x, y in zip(e, qg))
        v = out.get(mm, 0) - c
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def buchberger(polys: Sequence[Terms], key: Callable) -> list[Terms]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial)."""
    polys = [dict(p) for p in polys if p]
    if not polys:
        return []
    store: list[tuple[tuple, Terms]] = []
    sugar: list[int] = []
    G: list[int] = []
    B: list[tuple[int, int]] = []

    def update(h: int):
        nonlocal G, B
        h_lm = store[h][0]
        C = [g for g in G]
        D = []
        lcms = {g: _lcm(h_lm, store[g][0]) for g in C}
        while C:
            g1 = C.pop(0)
            l1 = lcms[g1]
            if _disjoint(h_lm, store[g1][0]):
                D.append(g1)
                continue
            if any(_divides(lcms[g2], l1) for g2 in C) or any(_divides(lcms[g2], l1) for g2 in D):
                continue
            D.append(g1)
        E = [(g, h) for g in D if not _disjoint(h_lm, store[g][0])]
        kept = []
        for (a, b) in B:
            lab = _lcm(store[a][0], store[b][0])
            if (_divides(h_lm, lab) and _lcm(store[a][0], h_lm) != lab
                    and _lcm(h_lm, store[b][0]) != lab):
                continue
            kept.append((a, b))
        B = kept + E
        G = [g for g in G if not _divides(h_lm, store[g][0])] + [h]

    def add(p: Terms, s: int) -> bool:
        lm, p = _monic(p, key)
        store.append((lm, p))
        sugar.append(s)
        if not any(lm):
            return True
        update(len(store) - 1)
        return False

    for p in sorted(polys, key=lambda q: key(max(q, key=key))):
        h = reduce_terms(p, [store[g] for g in G], key)
        if h:
            if add(h, max(sum(e) for e in p)):
                return [{(0,) * len(next(iter(h))): Fraction(1)}]

    while B:
        best = None
        for idx, (a, b) in enumerate(B):
            la, lb = store[a][0], store[b][0]
            lcm = _lcm(la, lb)
            s = max(sugar[a] + sum(lcm) - sum(la), sugar[b] + sum(lcm) - sum(lb))
            cand = (s, key(lcm), a, b)
            if best is None or cand < best[0]:
                best = (cand, idx)
        (s, _, a, b), idx = best
        B.pop(idx)
        sp = _spoly(store[a][0], store[a][1], store[b][0], store[b][1])
        if not sp:
            continue
        h = reduce_terms(sp, [store[g] for g in G], key)
        if h:
            if add(h, s):
                return [{(0,) * len(next(iter(h))): Fraction(1)}]

    # minimize and interreduce
    lead = [store[g] for g in G]
    minimal = []
    for i, (lm, p) in enumerate(lead):
        if any(_divides(lm2, lm) and (lm2 != lm or j < i) for j, (lm2, _) in enumerate(lead) if j != i):
            continue
        minimal.append((lm, p))
    reduced = []
    for i, (lm, p) in enumerate(minimal):
        others = [q for j, q in enumerate(minimal) if j != i]
        tail = {e: c for e, c in p.items() if e != lm}
        tail = reduce_terms(tail, others, key)
        tail[lm] = Fraction(1)
        reduced.append((lm, tail))
    reduced.sort(key=lambda t: key(t[0]), reverse=True)
    return [p for _, p in reduced]


def groebner_polys(polys: Sequence[Poly], order: MonomialOrder = GREVLEX,
                   vars: Sequence[str] | None = None) -> list[Poly]:
    ring = tuple(vars) if vars is not None else common_ring(polys)
    for p in polys:
        if p.vars != ring:
            raise RingMismatch("generators over different rings")
    out = buchberger([p.terms for p in polys if p], order.key())
    return [Poly._raw(ring, t) for t in out]


def normal_form_poly(p: Poly, basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    key = order.key()
    for g in basis:
        if g.vars != p.vars:
            raise RingMismatch(f"ring mismatch in normal_form: {p.vars} vs {g.vars}")
    monic = [_monic(dict(g.terms), key) for g in basis if g]
    return Poly._raw(p.vars, reduce_terms(p.terms, monic, key))
