"""Scalar differential equations for one period from a rank-r connection, via a cyclic vector."""

from __future__ import annotations

import random
from ..algebra import RationalFunction
from ..connection import ConnectionData


class CyclicVectorError(RuntimeError):
    pass


def _derive(w: list, A, var: str) -> list:
    """w' + w A for a row covector w."""
    r = len(w)
    return [w[j].diff(var) + sum((w[i] * A[i][j] for i in range(r)), RationalFunction.const(w[0].vars, 0))
            for j in range(r)]


def _solve_dependence(rows: list[list], target: list) -> list | None:
    """Coefficients c with sum c_k rows[k] = target, or None if rows are dependent."""
    r = len(rows)
    n = len(target)
    vars = target[0].vars
    zero = RationalFunction.const(vars, 0)
    # columns of the augmented system: unknowns c_k, equations per coordinate
    M = [[rows[k][j] for k in range(r)] + [target[j]] for j in range(n)]
    pivots = []
    row = 0
    for col in range(r):
        piv = next((i for i in range(row, n) if not M[i][col].is_zero()), None)
        if piv is None:
            return None
        M[row], M[piv] = M[piv], M[row]
        inv = RationalFunction.const(vars, 1) / M[row][col]
        M[row] = [a * inv for a in M[row]]
        for i in range(n):
            if i != row and not M[i][col].is_zero():
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[row])]
        pivots.append(col)
        row += 1
    for i in range(row, n):
        if not M[i][r].is_zero():
            return None
    out = [zero] * r
    for i, col in enumerate(pivots):
        out[col] = M[i][r]
    return out


def _start_vectors(r: int, vars, seed: int):
    one = RationalFunction.const(vars, 1)
    zero = RationalFunction.const(vars, 0)
    for i in range(r):
        yield [one if j == i else zero for j in range(r)]
    yield [one] * r
    rng = random.Random(seed)
    for _ in range(16):
        yield [RationalFunction.const(vars, rng.randint(-9, 9)) for _ in range(r)]


def cyclic_vector_ode(c: ConnectionData, direction: int = 0, seed: int = 0,
                      first_only: bool = False) -> list[RationalFunction]:
    """Coefficients [a_0, ..., a_{r-1}, 1] of the operator killing <w, periods> along one direction.

    Periods satisfy d(pi) = A pi; for a covector w the function <w, pi> has
    derivatives <w_k, pi> with w_{k+1} = w_k' + w_k A.  With first_only the
    start covector is e_1 and no fallback is tried.
    """
    r = c.rank
    var = c.vars[direction]
    A = c.matrix(direction)
    for n, w in enumerate(_start_vectors(r, c.vars, seed)):
        if first_only and n:
            break
        chain = [w]
        for _ in range(r):
            chain.append(_derive(chain[-1], A, var))
        coeffs = _solve_dependence(chain[:r], chain[r])
        if coeffs is not None:
            return [-a for a in coeffs] + [RationalFunction.const(c.vars, 1)]
    raise CyclicVectorError("no cyclic vector among the tried start covectors")

