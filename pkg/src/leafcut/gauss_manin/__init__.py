from .family import SuperellipticFamily, genus
from .periods import PeriodCheck, check_eigenspace, period_vector, sample_points, verify_periods
from .picard_fuchs import CyclicVectorError, cyclic_vector_ode
from .reduction import (
    EigenspaceBasis,
    GaussManinResult,
    ReductionError,
    TwistedCohomology,
    eigenspace_basis,
    gauss_manin,
    transversality_block,
)

__all__ = [
    "CyclicVectorError", "EigenspaceBasis", "GaussManinResult", "PeriodCheck", "ReductionError",
    "SuperellipticFamily", "TwistedCohomology", "check_eigenspace", "cyclic_vector_ode",
    "eigenspace_basis", "gauss_manin", "genus", "transversality_block", "period_vector", "sample_points", "verify_periods",
]
