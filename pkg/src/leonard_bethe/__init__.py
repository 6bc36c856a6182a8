"""Leonard triples of q-Racah type, Bethe equations and scalar products."""

from .bethe import BetheRootSet, SolverOptions, solve_hom, solve_inhom, solve_inhom_all
from .bslinear import build_system, det_route_s_half, nullspace_route, racah_via_det, verify_solution
from .params import DIAM, LABELS, PLAIN, STAR, TABLE1_PARAMS, ParamSet, load_config
from .qcalc import phi43_terminating, racah_eval
from .report import VerifyReport
from .scalprod import inhom_from_hom, scalar_direct, scalar_theorem
from .triple import build_triple, get_triple

__all__ = [
    "ParamSet",
    "load_config",
    "PLAIN",
    "STAR",
    "DIAM",
    "LABELS",
    "TABLE1_PARAMS",
    "build_triple",
    "get_triple",
    "phi43_terminating",
    "racah_eval",
    "BetheRootSet",
    "SolverOptions",
    "solve_hom",
    "solve_inhom",
    "solve_inhom_all",
    "scalar_theorem",
    "scalar_direct",
    "inhom_from_hom",
    "build_system",
    "verify_solution",
    "nullspace_route",
    "det_route_s_half",
    "racah_via_det",
    "VerifyReport",
]
__version__ = "0.1.0"
