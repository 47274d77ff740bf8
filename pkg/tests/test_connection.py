import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from leafcut.algebra import Poly, RationalFunction
from leafcut.connection import (
    ConnectionData,
    InvariantTensor,
    curvature,
    curvature_nonzero_entries,
    flat_section_check,
    frame_torsor,
    is_flat,
    is_involutive,
    tensor_connection,
    tensor_product_section,
    torsor_ring,
)
from leafcut.geometry import AffineChart


def conn(vars, mats, rank, ideal=()):
    return ConnectionData.from_json({"rank": rank, "base": {"vars": list(vars), "ideal": list(ideal)},
                                     "matrices": mats})


def exact_rank1(f: Poly) -> ConnectionData:
    """d - df: the rank-one connection whose flat sections are exp(f)."""
    chart = AffineChart.affine_space(f.vars)
    return ConnectionData(chart, 1, [[[RationalFunction(f.diff(v))]] for v in f.vars])


def monomials(vars, max_deg):
    for e in itertools.product(range(max_deg + 1), repeat=len(vars)):
        if sum(e) <= max_deg:
            yield Poly(vars, {e: 1})


def sympy_curvature_zero(c: ConnectionData) -> bool:
    syms = sympy.symbols(c.vars)

    def mat(i):
        return sympy.Matrix([[sympy.sympify(a.num.to_string().replace("^", "**")) /
                              sympy.sympify(a.den.to_string().replace("^", "**")) for a in row]
                             for row in c.matrix(i)]).subs(dict(zip(sympy.symbols(c.vars), syms)))

    for i, j in itertools.combinations(range(len(syms)), 2):
        Ai, Aj = mat(i), mat(j)
        F = Aj.diff(syms[i]) - Ai.diff(syms[j]) - (Ai * Aj - Aj * Ai)
        if sympy.simplify(F) != sympy.zeros(*F.shape):
            return False
    return True


@pytest.mark.parametrize("vars", [("s",), ("s", "t")])
def test_every_exact_rank1_monomial_connection_is_flat(vars):
    for m in monomials(vars, 4):
        assert is_flat(exact_rank1(m))


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda e: sum(e) <= 4),
                       st.fractions(-9, 9, max_denominator=5), max_size=6))
def test_exact_rank1_connections_flat(terms):
    f = Poly(("s", "t"), terms)
    c = exact_rank1(f)
    F, flat = curvature(c)
    assert flat and all(a.is_zero() for M in F.values() for r in M for a in r)


def test_zero_connection_flat():
    assert is_flat(conn(("s", "t"), [[["0", "0"], ["0", "0"]]] * 2, 2))


def test_heisenberg_detected():
    c = conn(("s", "t"), [[["0", "1", "0"], ["0", "0", "0"], ["0", "0", "0"]],
                          [["0", "0", "0"], ["0", "0", "1"], ["0", "0", "0"]]], 3)
    assert not is_flat(c)
    assert not sympy_curvature_zero(c)
    bad = curvature_nonzero_entries(c)
    assert [b["entry"] for b in bad] == [[0, 2]]


@given(st.sampled_from(["s^2*t", "s - t^3", "s*t + 1", "t^4"]),
       st.sampled_from([[[1, 2], [3, -1]], [[0, 1], [0, 0]], [[2, 0], [0, -2]]]))
def test_pullback_of_constant_matrix_flat_matches_sympy(f, X):
    fp = Poly.parse(f, ("s", "t"))
    mats = [[[f"{x}*({fp.diff(v).to_string()})" for x in row] for row in X] for v in ("s", "t")]
    c = conn(("s", "t"), mats, 2)
    assert is_flat(c) and sympy_curvature_zero(c)


def test_non_commuting_coefficients_not_flat():
    c = conn(("s", "t"), [[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]], 2)
    assert not is_flat(c) and not sympy_curvature_zero(c)


def test_rational_entries_and_singular_locus():
    c = conn(("s",), [[[["1", "s^2 - 1"]]]], 1)
    assert is_flat(c)
    assert c.singular_denominator == Poly.parse("s^2 - 1", ("s",))


def test_flat_sections_and_tensors():
    ring = ("s",)
    c = exact_rank1(Poly.parse("s^2", ring))  # flat sections exp(s^2): none rational
    assert not flat_section_check(c, [RationalFunction.const(ring, 1)])
    ab = conn(("s",), [[["0", "0"], ["0", "0"]]], 2)
    e1 = [RationalFunction.const(ring, 1), RationalFunction.const(ring, 0)]
    assert flat_section_check(ab, e1)
    assert flat_section_check(tensor_connection(ab, 1, 1), tensor_product_section(e1, e1))
    # dual pairing is invariant for every connection
    A = conn(("s",), [[["s", "1"], ["0", "2"]]], 2)
    ident = [RationalFunction.const(ring, x) for x in (1, 0, 0, 1)]
    assert flat_section_check(tensor_connection(A, 1, 1), ident)
    assert is_flat(tensor_connection(A, 2, 1))


def test_symplectic_torsor_dimension_and_involutive():
    X = [[1, 2], [3, -1]]
    mats = [[[f"{x}*2*s" for x in row] for row in X]]
    c = conn(("s",), mats, 2)
    ring = ("s",)
    J = [RationalFunction.const(ring, x) for x in (0, 1, -1, 0)]
    T, L = frame_torsor(c, [InvariantTensor(0, 2, J)])
    assert T.group_dimension == 3
    assert T.ring == torsor_ring(("s",), 2)
    assert is_involutive(T, L)
    T2, _ = frame_torsor(c)
    assert T2.group_dimension == 4


def test_non_flat_tensor_rejected():
    c = conn(("s",), [[["1", "0"], ["0", "0"]]], 2)
    ring = ("s",)
    with pytest.raises(ValueError):
        frame_torsor(c, [InvariantTensor(1, 0, [RationalFunction.const(ring, 1), RationalFunction.const(ring, 0)])])


def test_leaf_fields_solve_the_frame_equation():
    c = conn(("s",), [[["s", "1"], ["0", "-1"]]], 2)
    T, L = frame_torsor(c)
    X = L.fields[0]
    # d(beta)/ds = -beta A along the leaf; pick the b1_2 component: -(b1_1*1 + b1_2*(-1))
    k = T.ring.index("b1_2")
    assert X[k] == RationalFunction(Poly.parse("-b1_1 + b1_2", T.ring))
    assert X[T.ring.index("dinv")] == RationalFunction(Poly.parse("dinv*(s - 1)", T.ring))


def test_json_round_trip():
    c = conn(("s", "t"), [[[["1", "s"], "0"], ["t", "2"]], [["0", "0"], ["0", "0"]]], 2)
    again = ConnectionData.from_json(c.to_json())
    assert again.to_json() == c.to_json()
    assert again.matrix(0)[0][0] == RationalFunction.parse("1", "s", ("s", "t"))


def test_base_point_default_avoids_singularities():
    c = conn(("s",), [[[["1", "s*(s - 1)"]]]], 1)
    T, _ = frame_torsor(c)
    assert T.base_point[0] not in (Fraction(0), Fraction(1))
