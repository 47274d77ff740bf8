from .poly import GREVLEX, LEX, MonomialOrder, Poly, RingMismatch, format_poly, parse_poly
from .ideal import (
    GuardExceeded,
    Ideal,
    closure_of_image,
    eliminate,
    groebner_basis,
    ideal_dimension,
    normal_form,
    rank_locus,
    saturate,
)
from .ratfunc import RationalFunction

__all__ = [
    "GREVLEX", "LEX", "MonomialOrder", "Poly", "RingMismatch", "format_poly", "parse_poly",
    "GuardExceeded", "Ideal", "closure_of_image", "eliminate", "groebner_basis",
    "ideal_dimension", "normal_form", "rank_locus", "saturate", "RationalFunction",
]
