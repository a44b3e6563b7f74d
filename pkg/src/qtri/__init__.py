"""Desk-scale laboratory for a sublinear quantum-query triangle detector.

Exact graph kernels, a query-cost ledger, outcome-faithful models of the
quantum search subroutines, the staged detection algorithm, its cost
analysis, and spectral adversary diagnostics.
"""

from .adversary import (
    PartialBooleanFunction,
    adversary_value,
    barrier_check,
    certificate_size,
    decomposition_diagnostic,
    gamma_i,
    spectral_norm,
    validate_gamma,
)
from .analysis import (
    CostTerms,
    ScalingFit,
    baseline_scaling,
    cost_terms,
    disjointness_prob_approx,
    disjointness_prob_exact,
    empirical_scaling,
    folklore_baseline,
    optimize_params,
    threshold_violation_rate,
)
from .graphs import (
    EdgeSet,
    Graph,
    bipartite_edges,
    enumerate_triangles,
    generate,
    load_graph,
    neighborhood,
    path2_count,
    save_graph,
    threshold_graph,
    triangle_count,
)
from .grover import (
    GroverOutcome,
    SearchSpace,
    edge_restricted_triangle_search,
    grover_search,
    grover_success_prob,
    safe_grover,
    schedule_success_prob,
)
from .oracle import (
    BudgetExceededError,
    LedgerReport,
    QueryLedger,
    QueryOracle,
    StepTag,
    default_budget,
)
from .rng import derive_seed, substream
from .solver import Hypothesis, Params, RunReport, solve

__all__ = [
    "BudgetExceededError",
    "CostTerms",
    "EdgeSet",
    "Graph",
    "GroverOutcome",
    "Hypothesis",
    "LedgerReport",
    "Params",
    "PartialBooleanFunction",
    "QueryLedger",
    "QueryOracle",
    "RunReport",
    "ScalingFit",
    "SearchSpace",
    "StepTag",
    "adversary_value",
    "barrier_check",
    "baseline_scaling",
    "bipartite_edges",
    "certificate_size",
    "cost_terms",
    "decomposition_diagnostic",
    "default_budget",
    "derive_seed",
    "disjointness_prob_approx",
    "disjointness_prob_exact",
    "edge_restricted_triangle_search",
    "empirical_scaling",
    "enumerate_triangles",
    "folklore_baseline",
    "gamma_i",
    "generate",
    "grover_search",
    "grover_success_prob",
    "load_graph",
    "neighborhood",
    "optimize_params",
    "path2_count",
    "safe_grover",
    "save_graph",
    "schedule_success_prob",
    "solve",
    "spectral_norm",
    "substream",
    "threshold_graph",
    "threshold_violation_rate",
    "triangle_count",
    "validate_gamma",
]
