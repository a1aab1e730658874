"""Rate regions of two-receiver broadcast channels with bounded information leakage."""

from .blackwell import (
    BlackwellParams,
    bwc_frontier,
    bwc_lstar,
    bwc_polytope,
    bwc_saturation_threshold,
    bwc_shapes,
    bwc_sumrate_curve,
)
from .channel import AuxChain, ChannelError, Dmbc, OuterChain, blackwell, classify, induce_joint
from .equivalence import (
    LiftReport,
    confidential_lift,
    deterministic_reduction_holds,
    reduction_suite,
    secret_pair_lift,
)
from .frontier import FrontierCurve, frontier_distance, frontier_dominates
from .pmf import JointPmf, Pmf, binary_entropy, conditional_mutual_information, entropy, mutual_information
from .polytope import RatePolytope
from .regions import (
    INF,
    LeakagePair,
    RatePoint,
    RegionId,
    inner_bound_polytope,
    leakage_threshold,
    named_region_polytope,
    outer_bound_polytope,
    saturation_check,
)
from .union import SearchBudget, union_frontier, union_search

__all__ = [
    "AuxChain", "BlackwellParams", "ChannelError", "Dmbc", "FrontierCurve", "INF", "JointPmf",
    "LeakagePair", "LiftReport", "OuterChain", "Pmf", "RatePoint", "RatePolytope", "RegionId",
    "SearchBudget", "binary_entropy", "blackwell", "bwc_frontier", "bwc_lstar", "bwc_polytope",
    "bwc_saturation_threshold", "bwc_shapes", "bwc_sumrate_curve", "classify",
    "conditional_mutual_information", "confidential_lift", "deterministic_reduction_holds",
    "entropy", "frontier_distance", "frontier_dominates", "induce_joint", "inner_bound_polytope",
    "leakage_threshold", "mutual_information", "named_region_polytope", "outer_bound_polytope",
    "reduction_suite", "saturation_check", "secret_pair_lift", "union_frontier", "union_search",
]
