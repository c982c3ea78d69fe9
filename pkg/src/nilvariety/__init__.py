"""Commutator words, exact lower-central-series weights, and finite-group checks
for varieties of groups whose d-generator subgroups are nilpotent."""

from .words import (Comm, FreeWord, Pow, Var, bracket, build_engel, build_gamma_word, build_V, build_W,
                    evaluate, expand, format_expr, formal_weight, hall_basic_commutators, parse_expr, x)
from .magnus import (SparseSeries, gamma_weight, is_law_of_Nc, leading_components_rank, magnus_embed,
                     witt_number)
from .groups import (FiniteGroup, SubgroupHandle, close, commutator_subgroup, engel_degree, exponent, fitting,
                     fitting_height, is_powerful, law_check, lower_central_series, nilpotency_class,
                     normal_closure, power_subgroup, quotient, subgroup, variety_class)
from .theorems import VerificationReport, bounds, compute_r_engel, compute_r_variety, run_suite

__version__ = "0.1.0"

__all__ = [
    "Comm", "FreeWord", "Pow", "Var", "bracket", "build_engel", "build_gamma_word", "build_V", "build_W",
    "evaluate", "expand", "format_expr", "formal_weight", "hall_basic_commutators", "parse_expr", "x",
    "SparseSeries", "gamma_weight", "is_law_of_Nc", "leading_components_rank", "magnus_embed", "witt_number",
    "FiniteGroup", "SubgroupHandle", "close", "commutator_subgroup", "engel_degree", "exponent", "fitting",
    "fitting_height", "is_powerful", "law_check", "lower_central_series", "nilpotency_class",
    "normal_closure", "power_subgroup", "quotient", "subgroup", "variety_class",
    "VerificationReport", "bounds", "compute_r_engel", "compute_r_variety", "run_suite",
]
