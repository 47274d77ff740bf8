"""Dimension bookkeeping for atypical intersections and a priori degree bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence


@dataclass(frozen=True)
class AtypicalityReport:
    dim_U: int
    dim_V: int
    dim_P: int
    dim_L: int
    dim_H: int
    atypical: bool
    codim_form: bool
    dim_form: bool

    def to_json(self) -> dict:
        return {
            "dim_U": self.dim_U, "dim_V": self.dim_V, "dim_P": self.dim_P,
            "dim_L": self.dim_L, "dim_H": self.dim_H, "atypical": self.atypical,
            "codim_form": self.codim_form, "dim_form": self.dim_form,
        }


def atypicality_check(dim_U: int, dim_V: int, dim_P: int, dim_L: int, dim_H: int) -> AtypicalityReport:
    """U a component of V meet a leaf L inside P; atypical when codim U is too small."""
    dims = dict(dim_U=dim_U, dim_V=dim_V, dim_P=dim_P, dim_L=dim_L, dim_H=dim_H)
    for name, d in dims.items():
        if d < 0:
            raise ValueError(f"{name} must be nonnegative")
    for name in ("dim_U", "dim_V", "dim_L", "dim_H"):
        if dims[name] > dim_P:
            raise ValueError(f"{name} exceeds dim_P")
    codim_form = (dim_P - dim_U) < (dim_P - dim_V) + (dim_P - dim_L)
    dim_form = dim_V < dim_U + dim_H
    if codim_form != dim_form:
        raise ValueError("inconsistent dimensions: codimension and dimension forms disagree"
                         f" (dim_P - dim_L = {dim_P - dim_L}, dim_H = {dim_H})")
    return AtypicalityReport(dim_U, dim_V, dim_P, dim_L, dim_H, codim_form, codim_form, dim_form)


def atypical_range(e: int, dim_S: int, dim_flag: int) -> tuple[int, Callable[[int], bool]]:
    if not 0 <= e <= dim_S:
        raise ValueError("need 0 <= e <= dim_S")
    if dim_flag < 0:
        raise ValueError("dim_flag must be nonnegative")
    rho = e + dim_flag - dim_S
    return rho, (lambda j: j < rho)


def degree_budget(deg_V: int, kappa: int | None = None, r: int | None = None, steps: int = 1,
                  stages: Sequence[tuple[int, int]] | None = None) -> int:
    """deg_V * kappa^r per projection stage, composed over the stages (exact integers)."""
    if stages is None:
        if kappa is None or r is None:
            raise ValueError("give kappa and r, or an explicit stage list")
        stages = [(kappa, r)] * steps
    if deg_V < 0 or steps < 0:
        raise ValueError("degrees and step counts are nonnegative")
    bound = deg_V
    for k, rr in stages:
        if k < 0 or rr < 0:
            raise ValueError("degrees and dimensions are nonnegative")
        bound *= k ** rr
    return bound
