"""Affine charts and chart-glued varieties."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..algebra import Ideal, Poly


@dataclass(frozen=True)
class AffineChart:
    vars: tuple[str, ...]
    ideal: Ideal

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.ideal.ring != self.vars:
            raise ValueError(f"chart ideal lives over {self.ideal.ring}, chart over {self.vars}")

    @classmethod
    def affine_space(cls, vars: Sequence[str]) -> "AffineChart":
        return cls(tuple(vars), Ideal.zero(vars))

    @property
    def ambient_dim(self) -> int:
        return len(self.vars)

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "ideal": self.ideal.serialize()}

    @classmethod
    def from_json(cls, data: dict) -> "AffineChart":
        vars = tuple(data["vars"])
        return cls(vars, Ideal.parse(vars, data.get("ideal", [])))


def pair_ring(a: AffineChart, b: AffineChart) -> tuple[str, ...]:
    """Variables of chart_a x chart_b: first factor tagged _1, second _2."""
    return tuple(v + "_1" for v in a.vars) + tuple(v + "_2" for v in b.vars)


def _swap_tags(p: Poly, ring: tuple[str, ...]) -> Poly:
    def flip(v):
        return v[:-2] + ("_2" if v.endswith("_1") else "_1")
    return p.subs({v: Poly.var(ring, flip(v)) for v in p.vars}, ring)


@dataclass(frozen=True)
class ChartedVariety:
    """Charts plus, for each ordered pair, an ideal cutting the diagonal in chart_i x chart_j.

    Algorithms run chart by chart; ``validate`` checks the gluing data for
    consistency but nothing is globalized automatically.
    """

    charts: tuple[AffineChart, ...]
    diagonal_ideals: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        for (i, j), D in self.diagonal_ideals.items():
            want = pair_ring(self.charts[i], self.charts[j])
            if D.ring != want:
                raise ValueError(f"diagonal ideal ({i},{j}) lives over {D.ring}, expected {want}")

    def per_chart(self, fn: Callable[[AffineChart], object]) -> list:
        return [fn(c) for c in self.charts]

    def validate(self) -> list[str]:
        problems = []
        for (i, j), D in sorted(self.diagonal_ideals.items()):
            if (j, i) in self.diagonal_ideals:
                other = self.diagonal_ideals[(j, i)]
                swapped = Ideal(D.ring, [_swap_tags(g, D.ring) for g in other.generators])
                if not swapped.same_ideal(D):
                    problems.append(f"diagonal ideals ({i},{j}) and ({j},{i}) are not swaps of each other")
            if i == j:
                chart = self.charts[i]
                base = Ideal(chart.vars, chart.ideal.generators)
                back = {v + "_1": Poly.var(chart.vars, v) for v in chart.vars}
                back.update({v + "_2": Poly.var(chart.vars, v) for v in chart.vars})
                for g in D.generators:
                    on_diag = g.subs(back, chart.vars)
                    if not base.vanishes_on(on_diag):
                        problems.append(f"diagonal ideal ({i},{i}) does not contain the diagonal")
                        break
        return problems
