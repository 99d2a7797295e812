"""Branched coverings of simplicial complexes and branchfold charts."""

from .action import SimplicialAction, quotient
from .charts import (Chart, chart_index, charts_equivalent, common_dominating_chart,
                     conical_restriction, dominates, lift_chart, local_characteristic,
                     quotient_chart, reduce_chart, validate_chart)
from .complex import Complex, Subcomplex, barycentric_subdivide, is_good_subcomplex
from .covering import (CoveringMap, MonodromyCocycle, analyze, extract_cocycle, fox_complete,
                       minimal_regularization, pullback)
from .errors import BranchfoldError
from .perm import Permutation, PermGroup

__all__ = [
    "BranchfoldError", "Chart", "Complex", "CoveringMap", "MonodromyCocycle", "PermGroup",
    "Permutation", "SimplicialAction", "Subcomplex", "analyze", "barycentric_subdivide",
    "chart_index", "charts_equivalent", "common_dominating_chart", "conical_restriction",
    "dominates", "extract_cocycle", "fox_complete", "is_good_subcomplex", "lift_chart",
    "local_characteristic", "minimal_regularization", "pullback", "quotient", "quotient_chart",
    "reduce_chart", "validate_chart",
]
__version__ = "0.1.0"
