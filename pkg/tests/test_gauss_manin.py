import json
from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import given, strategies as st

from leafcut.connection import ConnectionData, curvature_nonzero_entries, is_flat
from leafcut.gauss_manin import (
    CyclicVectorError,
    SuperellipticFamily,
    cyclic_vector_ode,
    eigenspace_basis,
    gauss_manin,
    genus,
    sample_points,
    transversality_block,
    verify_periods,
)
from period_oracle import legendre_ode_residual, operator_residual, to_expr

CORPUS = Path(__file__).parent.parent / "corpus"
LEGENDRE = SuperellipticFamily(2, (1, 1, 1), ("0", "1", "l"))
GENUS11 = SuperellipticFamily(12, (6, 4, 5, 4), ("0", "1", "x2", "x3"))
LAMBDAS = [Fraction(n, d) for n, d in [(3, 2), (5, 3), (2, 1), (7, 3), (5, 2), (3, 1), (10, 3), (7, 2),
                                       (4, 1), (9, 2), (5, 1), (11, 2), (6, 1), (13, 2), (7, 1), (8, 1),
                                       (17, 2), (9, 1), (10, 1), (12, 1)]]


@pytest.fixture(scope="module")
def legendre():
    return gauss_manin(LEGENDRE)


@pytest.fixture(scope="module")
def genus11():
    return gauss_manin(GENUS11)


# genus -----------------------------------------------------------------------

def test_genus_examples():
    assert genus(LEGENDRE) == 1
    assert GENUS11.infinity_exponent == 5
    assert genus(GENUS11) == 11
    assert genus(SuperellipticFamily(2, (1, 1), ("0", "1"))) == 0


def test_genus_errors():
    with pytest.raises(ValueError, match="degenerate"):
        genus(SuperellipticFamily(2, (2, 1), ("0", "1")))
    with pytest.raises(ValueError, match="disconnected"):
        genus(SuperellipticFamily(4, (2, 2), ("0", "1")))


def test_infinity_exponent_convention():
    # the exponent at infinity makes the total divisible by N
    for N, ex in [(2, (1, 1, 1)), (3, (1, 1)), (5, (1, 2, 3)), (12, (6, 4, 5, 4))]:
        fam = SuperellipticFamily(N, ex, tuple(str(i) for i in range(len(ex))))
        assert (sum(ex) + fam.infinity_exponent) % N == 0
    # u -> 1/u swaps 0 and infinity: v^3 = u (u-1) has the same genus as v^3 = (u-1) u^(-2)
    assert genus(SuperellipticFamily(3, (1, 1), ("0", "1"))) == genus(SuperellipticFamily(3, (1, 1), ("1", "0")))
    fam = SuperellipticFamily(3, (1, 1), ("0", "1"))
    assert fam.relevant(1) == ([0, 1], True)
    assert eigenspace_basis(fam, 1).rank == 1


@given(st.integers(2, 9), st.lists(st.integers(1, 30), min_size=2, max_size=5))
def test_ranks_sum_to_twice_genus(N, raw):
    ex = tuple(a % N or 1 for a in raw)
    fam = SuperellipticFamily(N, ex, tuple(str(3 * i) for i in range(len(ex))))
    if fam.diagnostics():
        return
    g = genus(fam)
    assert sum(fam.eigenspace_rank(k) for k in range(1, N)) == 2 * g


# eigenspaces and hodge data ----------------------------------------------------

def test_legendre_basis(legendre):
    assert legendre.genus == 1
    b = legendre.bases[1]
    assert b.rank == 2 and b.holomorphic == 1
    assert [f["numerator"] for f in b.forms] == ["1", "u"]
    assert legendre.hodge_sub == {1: [0]}


def test_genus11_invariants(genus11):
    r = genus11
    assert r.genus == 11
    assert r.bases[1].rank == 3 == len(GENUS11.params) + 1
    assert r.meta["standard_rank_ok"]
    assert sum(b.rank for b in r.bases.values()) == 22
    assert sum(len(h) for h in r.hodge_sub.values()) == 11
    c = r.connections[1]
    assert c.vars == ("x2", "x3") and c.rank == 3
    assert is_flat(c)
    for k in r.bases:
        if k in r.connections:
            assert not curvature_nonzero_entries(r.connections[k])
        assert len(r.hodge_sub[k]) + len(r.hodge_sub[12 - k]) == r.bases[k].rank


def test_rank_zero_eigenspace():
    fam = SuperellipticFamily(4, (2, 1, 1), ("0", "1", "t"))
    assert fam.relevant(2)[0] == [1, 2] and not fam.relevant(2)[1]
    fam2 = SuperellipticFamily(6, (3, 3, 2, 4), ("0", "1", "2", "t"))
    # k = 2 leaves two relevant finite points and none at infinity
    assert fam2.eigenspace_rank(2) == 0
    res = gauss_manin(fam2, characters=[2])
    assert res.bases[2].rank == 0 and 2 not in res.connections


def test_zero_parameter_family():
    res = gauss_manin(SuperellipticFamily(3, (1, 1, 1), ("0", "1", "-1")))
    c = res.connections[1]
    assert c.vars == () and c.to_json()["matrices"] == []
    assert res.genus == 1


def test_character_range_checked():
    with pytest.raises(ValueError):
        gauss_manin(LEGENDRE, characters=[2])


def test_transversality_block_nonzero(legendre, genus11):
    for res in (legendre, genus11):
        for k, c in res.connections.items():
            if res.hodge_sub[k] and len(res.hodge_sub[k]) < res.bases[k].rank:
                blocks = transversality_block(res, k)
                assert any(not x.is_zero() for B in blocks for row in B for x in row), k


def test_every_corpus_family_is_flat():
    for path in sorted(CORPUS.glob("gm_*.json")):
        payload = json.loads(path.read_text())["payload"]
        fam = SuperellipticFamily.from_json(payload)
        res = gauss_manin(fam)
        assert sum(b.rank for b in res.bases.values()) == 2 * res.genus
        assert sum(len(h) for h in res.hodge_sub.values()) == res.genus
        assert all(is_flat(c) for c in res.connections.values()), path.stem


def test_serial_and_parallel_agree():
    a = gauss_manin(SuperellipticFamily(5, (1, 2, 3, 4), ("0", "1", "-1", "t")))
    b = gauss_manin(SuperellipticFamily(5, (1, 2, 3, 4), ("0", "1", "-1", "t")), workers=2)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


# Picard-Fuchs -------------------------------------------------------------------

def _line(mats, var="t"):
    return ConnectionData.from_json({"rank": len(mats), "base": {"vars": [var], "ideal": []}, "matrices": [mats]})


def test_legendre_operator_up_to_unit(legendre):
    ode = cyclic_vector_ode(legendre.connections[1])
    l = sympy.Symbol("l")
    ours = [to_expr(c, ["l"]) for c in ode]
    target = [-sympy.Rational(1, 4), 1 - 2 * l, l * (1 - l)]
    unit = sympy.cancel(target[2] / ours[2])
    assert all(sympy.cancel(t - unit * o) == 0 for t, o in zip(target, ours))


def test_legendre_oracle_at_twenty_points(legendre):
    ode = cyclic_vector_ode(legendre.connections[1])
    l = sympy.Symbol("l")
    coeffs = [sympy.lambdify(l, to_expr(c, ["l"]), "mpmath") for c in ode]
    assert len(LAMBDAS) == 20
    for lam in LAMBDAS:
        assert legendre_ode_residual(lam) < 1e-8
        assert operator_residual(coeffs, lam) < 1e-8


def test_rank_one_operator():
    f_prime = "3*t^2 - 2"
    ode = cyclic_vector_ode(_line([[f_prime]]))
    t = sympy.Symbol("t")
    assert sympy.expand(to_expr(ode[0], ["t"]) + 3 * t ** 2 - 2) == 0
    assert to_expr(ode[1], ["t"]) == 1


@pytest.mark.parametrize("a,b", [("1", "t"), ("2", "-1"), ("t", "t^2")])
def test_direct_sum_operator(a, b):
    t = sympy.Symbol("t")
    ode = cyclic_vector_ode(_line([[a, "0"], ["0", b]]))
    assert len(ode) == 3
    c0, c1, c2 = (to_expr(c, ["t"]) for c in ode)
    A, B = (sympy.sympify(x.replace("^", "**")) for x in (a, b))
    for sol in (sympy.exp(sympy.integrate(A, t)), sympy.exp(sympy.integrate(B, t))):
        assert sympy.simplify(c2 * sol.diff(t, 2) + c1 * sol.diff(t) + c0 * sol) == 0


def test_no_cyclic_vector():
    with pytest.raises(CyclicVectorError):
        cyclic_vector_ode(_line([["1", "0"], ["0", "1"]]))
    with pytest.raises(CyclicVectorError):
        cyclic_vector_ode(_line([["1", "0"], ["0", "t"]]), first_only=True)


# numeric certification ----------------------------------------------------------

CASES = [
    ("legendre", LEGENDRE),
    ("quartic", SuperellipticFamily(2, (1, 1, 1, 1), ("0", "1", "-1", "l"))),
    ("cubic two-parameter", SuperellipticFamily(3, (1, 1, 1, 1), ("0", "1", "x", "y"))),
    ("quintic", SuperellipticFamily(5, (1, 2, 3, 4), ("0", "1", "-1", "t"))),
]


@pytest.mark.parametrize("name,fam", CASES, ids=[c[0] for c in CASES])
def test_periods_satisfy_connection(name, fam):
    res = gauss_manin(fam)
    report = verify_periods(res, points=10, seed=1)
    assert len(report["samples"]) == 10
    assert report["max_residual"] is not None and report["max_residual"] < 1e-8


@pytest.mark.slow
def test_corpus_periods_satisfy_connection():
    for path in sorted(CORPUS.glob("gm_*.json")):
        spec = json.loads(path.read_text())
        res = gauss_manin(SuperellipticFamily.from_json(spec["payload"]))
        report = verify_periods(res, points=10, seed=spec.get("seed", 0))
        if res.family.params:
            assert report["max_residual"] < 1e-8, path.stem


def test_perturbed_connection_is_caught(legendre):
    from leafcut.algebra import RationalFunction
    from leafcut.gauss_manin.periods import check_eigenspace
    c = legendre.connections[1]
    M = [list(row) for row in c.matrix(0)]
    M[0][0] = M[0][0] + RationalFunction.const(c.vars, Fraction(1, 100))
    bad = ConnectionData(c.base, c.rank, [M])
    res = type(legendre)(legendre.family, legendre.genus, legendre.bases, {1: bad}, legendre.hodge_sub)
    chk = check_eigenspace(res, 1, sample_points(LEGENDRE, 1, 0)[0])
    assert chk.checked and chk.residual > 1e-6


def test_sample_points_distinct():
    for vals in sample_points(GENUS11, 10, 4):
        pts = [Fraction(0), Fraction(1), vals["x2"], vals["x3"]]
        assert len(set(pts)) == 4
