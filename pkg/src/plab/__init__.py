"""Exact verification lab for sumset-cardinality inequalities over finite groups."""

from .alphabeta import (EQ, GT, LT, AlphaTable, BetaValue, alpha_table,
                        beta_identity_holds, beta_value, cmp_ratio_vs_beta,
                        synthetic_alpha_table)
from .errors import (PlabError, ResourceError, TheoremViolationError, UsageError,
                     ValidationError)
from .groups import (GSet, Group, Instance, direct_power, element_cap,
                     embed_integer_sets, iterated_sumset, make_abelian_group,
                     make_cayley_group, power_group, power_set, sumset)
from .magnification import (MagResult, PlunGraph, build_plun_graph,
                            gamma_exhaustive, gamma_flow, multiplicativity_check)
from .theorems import (EmpiricalConstant, LargeSubsetResult, TheoremVerdict,
                       check_noncommutative, check_pldiff, check_plgen,
                       check_restricted_sum, check_single_summand,
                       empirical_plgen2, ensure_holds, large_subset,
                       restricted_pipeline)
from .constructions import (Lemma21Report, Lemma21Setup, admissible_q,
                            build_extension, lemma21_demo, power_experiment)

__all__ = [
    "AlphaTable", "BetaValue", "EQ", "EmpiricalConstant", "GSet", "GT", "Group",
    "Instance", "LT", "LargeSubsetResult", "Lemma21Report", "Lemma21Setup",
    "MagResult", "PlabError", "PlunGraph", "ResourceError",
    "TheoremViolationError", "TheoremVerdict", "UsageError", "ValidationError",
    "admissible_q", "alpha_table", "beta_identity_holds", "beta_value",
    "build_extension", "build_plun_graph", "check_noncommutative", "check_pldiff",
    "check_plgen", "check_restricted_sum", "check_single_summand",
    "cmp_ratio_vs_beta", "direct_power", "element_cap", "embed_integer_sets",
    "empirical_plgen2", "ensure_holds", "gamma_exhaustive", "gamma_flow",
    "iterated_sumset", "large_subset", "lemma21_demo", "make_abelian_group",
    "make_cayley_group", "multiplicativity_check", "power_experiment",
    "power_group", "power_set", "restricted_pipeline", "sumset",
    "synthetic_alpha_table",
]
