"""Sampling-based motion planning for hybrid dynamical systems."""

from .core import (
    HybridSystem,
    HybridTime,
    HybridTimeDomain,
    Sample,
    SolutionPair,
    ValidationTolerances,
    concatenate,
    domain_of,
    validate_solution_pair,
)
from .hyrrt import ExtendStatus, HyrrtParams, PlannerResult, hyrrt_solve
from .hysst import HysstParams, hybrid_time_cost, hysst_solve
from .rng import RngStream
from .simulation import (
    FlowParams,
    PropagationResult,
    TerminalReason,
    collision_check,
    continuous_simulate,
    discrete_simulate,
)
from .tree import (
    Motion,
    PlannerProblem,
    SearchTree,
    extract_path,
    init_tree,
    nearest_neighbor,
    random_input,
    random_state,
)

__all__ = [
    "ExtendStatus",
    "FlowParams",
    "HybridSystem",
    "HybridTime",
    "HybridTimeDomain",
    "HyrrtParams",
    "HysstParams",
    "Motion",
    "PlannerProblem",
    "PlannerResult",
    "PropagationResult",
    "RngStream",
    "Sample",
    "SearchTree",
    "SolutionPair",
    "TerminalReason",
    "ValidationTolerances",
    "collision_check",
    "concatenate",
    "continuous_simulate",
    "discrete_simulate",
    "domain_of",
    "extract_path",
    "hybrid_time_cost",
    "hyrrt_solve",
    "hysst_solve",
    "init_tree",
    "nearest_neighbor",
    "random_input",
    "random_state",
    "validate_solution_pair",
]

__version__ = "0.1.0"
