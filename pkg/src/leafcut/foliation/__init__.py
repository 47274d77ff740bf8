from .atypical import AtypicalityReport, atypical_range, atypicality_check, degree_budget
from .loci import (
    FamilyOfSubvarieties,
    LocusResult,
    family_leaf_locus,
    generic_tangency_dim,
    intersect_families,
    leaf_locus,
    tangency_locus,
)
from .zilber_pink import FamilyValidationError, ZPConfig, ZPResult, strict_inclusion, zp_candidate_loci

__all__ = [
    "AtypicalityReport", "atypical_range", "atypicality_check", "degree_budget",
    "FamilyOfSubvarieties", "LocusResult", "family_leaf_locus", "generic_tangency_dim",
    "intersect_families", "leaf_locus", "tangency_locus",
    "FamilyValidationError", "ZPConfig", "ZPResult", "strict_inclusion", "zp_candidate_loci",
]
