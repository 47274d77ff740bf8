from .charts import AffineChart, ChartedVariety, pair_ring
from .constructible import (
    ConstructibleSet,
    contained_in_union,
    cs_complement,
    cs_difference,
    cs_equal,
    cs_intersect,
    cs_is_member,
    cs_subset,
    cs_union,
    make_piece,
    piece_is_empty,
)
from .projection import (
    Stratum,
    closure_of_projection,
    cs_project,
    fibre_dim_stratify,
    fibre_strata,
)

__all__ = [
    "AffineChart", "ChartedVariety", "pair_ring", "ConstructibleSet", "contained_in_union",
    "cs_complement", "cs_difference", "cs_equal", "cs_intersect", "cs_is_member", "cs_subset",
    "cs_union", "make_piece", "piece_is_empty", "Stratum", "closure_of_projection", "cs_project",
    "fibre_dim_stratify", "fibre_strata",
]
