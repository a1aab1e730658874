"""Symbolic rate-inequality systems and Fourier-Motzkin elimination."""

from .catalog import REGIONS, RegionSpec, achievability_system, inner_bound_reference, region_system
from .ops import (
    AUX_ORDER,
    canonical_equal,
    diff_systems,
    eliminate_all,
    entropy_basis,
    fme_eliminate,
    prune_redundant,
    substitute,
)
from .symbols import ONE, H, I, InfoSymbol, L, parse_symbol
from .system import Inequality, IneqSystem, ParseError, parse_inequality, parse_system, render_system

__all__ = [
    "AUX_ORDER", "H", "I", "IneqSystem", "Inequality", "InfoSymbol", "L", "ONE", "ParseError",
    "REGIONS", "RegionSpec", "achievability_system", "canonical_equal", "diff_systems",
    "eliminate_all", "entropy_basis", "fme_eliminate", "inner_bound_reference", "parse_inequality",
    "parse_symbol", "parse_system", "prune_redundant", "region_system", "render_system", "substitute",
]
