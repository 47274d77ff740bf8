"""Constructible subsets of affine space as unions of locally closed pieces.

A piece ``(C, O)`` stands for V(C) minus V(O); the open-complement ideal
always contains the closed ideal, so V(O) is a subset of V(C).  Pieces are
not kept canonical; compare sets semantically.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

from ..algebra import Ideal, Poly, RingMismatch

Piece = tuple[Ideal, Ideal]


def product(ring, polys: Sequence[Poly]) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly.const(ring, 1))


def piece_is_empty(closed: Ideal, open_complement: Ideal) -> bool:
    # V(C) \ V(O) is empty iff every generator of O vanishes on V(C)
    if closed.is_unit():
        return True
    return all(closed.vanishes_on(o) for o in open_complement.generators)


def make_piece(closed: Ideal, removed: Sequence[Poly] | Ideal = ()) -> Piece:
    """The piece V(closed) minus V(closed + removed); an empty ``removed`` leaves nothing."""
    gens = removed.generators if isinstance(removed, Ideal) else removed
    return closed, closed + list(gens)


class ConstructibleSet:
    __slots__ = ("ring", "pieces")

    def __init__(self, ring: Sequence[str], pieces: Sequence[Piece] = ()):
        self.ring = tuple(ring)
        out = []
        for C, O in pieces:
            if C.ring != self.ring or O.ring != self.ring:
                raise RingMismatch(f"piece over {C.ring} in a set over {self.ring}")
            out.append((C, O + C.generators))
        self.pieces = tuple(out)

    @classmethod
    def empty(cls, ring: Sequence[str]) -> "ConstructibleSet":
        return cls(ring, [])

    @classmethod
    def closed(cls, I: Ideal) -> "ConstructibleSet":
        return cls(I.ring, [(I, Ideal.unit(I.ring))])

    @classmethod
    def whole(cls, ring: Sequence[str]) -> "ConstructibleSet":
        return cls.closed(Ideal.zero(ring))

    @classmethod
    def locally_closed(cls, closed: Ideal, removed: Sequence[Poly] | Ideal = ()) -> "ConstructibleSet":
        """V(closed) minus the common zeros of ``removed``; nothing is removed when it is empty."""
        gens = removed.generators if isinstance(removed, Ideal) else tuple(removed)
        if not gens:
            return cls.closed(closed)
        return cls(closed.ring, [make_piece(closed, gens)])

    def simplify(self) -> "ConstructibleSet":
        return ConstructibleSet(self.ring, [p for p in self.pieces if not piece_is_empty(*p)])

    def is_empty(self) -> bool:
        return all(piece_is_empty(*p) for p in self.pieces)

    def contains_point(self, point) -> bool:
        return cs_is_member(point, self)

    def to_ring(self, ring: Sequence[str]) -> "ConstructibleSet":
        return ConstructibleSet(ring, [(C.to_ring(ring), O.to_ring(ring)) for C, O in self.pieces])

    def to_json(self) -> dict:
        pieces = [{"closed": C.serialize(), "open_complement": O.serialize()} for C, O in self.pieces]
        pieces.sort(key=lambda d: (d["closed"], d["open_complement"]))
        return {"ring": list(self.ring), "pieces": pieces}

    @classmethod
    def from_json(cls, data: dict) -> "ConstructibleSet":
        ring = tuple(data["ring"])
        return cls(ring, [(Ideal.parse(ring, p["closed"]), Ideal.parse(ring, p["open_complement"]))
                          for p in data["pieces"]])

    def __repr__(self):
        return f"ConstructibleSet({self.to_json()})"


def _check(A: ConstructibleSet, B: ConstructibleSet):
    if A.ring != B.ring:
        raise RingMismatch(f"constructible sets over {A.ring} and {B.ring}")


def cs_union(A: ConstructibleSet, B: ConstructibleSet) -> ConstructibleSet:
    _check(A, B)
    return ConstructibleSet(A.ring, A.pieces + B.pieces)


def _intersect_pieces(p: Piece, q: Piece) -> Piece:
    (C1, O1), (C2, O2) = p, q
    C = C1 + C2
    return C, C + [a * b for a in O1.generators for b in O2.generators]


def cs_intersect(A: ConstructibleSet, B: ConstructibleSet) -> ConstructibleSet:
    _check(A, B)
    pieces = []
    for p in A.pieces:
        for q in B.pieces:
            r = _intersect_pieces(p, q)
            if not piece_is_empty(*r):
                pieces.append(r)
    return ConstructibleSet(A.ring, pieces)


def _open_complement(C: Ideal) -> list[Piece]:
    """Affine space minus V(C) as disjoint pieces V(c_1..c_{i-1}) minus V(c_i)."""
    pieces = []
    gens = C.generators
    for i, c in enumerate(gens):
        closed = Ideal(C.ring, gens[:i])
        pieces.append(make_piece(closed, [c]))
    return pieces


def _piece_complement(p: Piece) -> ConstructibleSet:
    C, O = p
    return ConstructibleSet(C.ring, _open_complement(C) + [(O, Ideal.unit(O.ring))])


def cs_complement(A: ConstructibleSet) -> ConstructibleSet:
    out = ConstructibleSet.whole(A.ring)
    for p in A.pieces:
        if piece_is_empty(*p):
            continue
        out = cs_intersect(out, _piece_complement(p))
        if not out.pieces:
            break
    return out


def cs_difference(A: ConstructibleSet, B: ConstructibleSet) -> ConstructibleSet:
    return cs_intersect(A, cs_complement(B))


def cs_is_member(point, A: ConstructibleSet) -> bool:
    if len(point) != len(A.ring):
        raise ValueError("point has the wrong length")
    for C, O in A.pieces:
        if all(g.evaluate(point) == 0 for g in C.generators) and \
                any(o.evaluate(point) != 0 for o in O.generators):
            return True
    return False


def cs_subset(A: ConstructibleSet, B: ConstructibleSet) -> bool:
    return cs_difference(A, B).is_empty()


def cs_equal(A: ConstructibleSet, B: ConstructibleSet) -> bool:
    return cs_subset(A, B) and cs_subset(B, A)


def contained_in_union(C: ConstructibleSet, Us: Sequence[ConstructibleSet]):
    """(True, indices) with a greedily minimized cover, or (False, witness C minus the union)."""
    for U in Us:
        _check(C, U)

    def rest(indices):
        total = ConstructibleSet.empty(C.ring)
        for i in indices:
            total = cs_union(total, Us[i])
        return cs_difference(C, total)

    idx = list(range(len(Us)))
    witness = rest(idx)
    if not witness.is_empty():
        return False, witness.simplify()
    for i in list(idx):
        trial = [j for j in idx if j != i]
        if rest(trial).is_empty():
            idx = trial
    return True, idx

