"""Firefly algorithm, its special-case reductions, discretization operators
and swarm-structure diagnostics."""

from .core import (
    BudgetExhausted,
    ConfigurationError,
    DimensionError,
    Evaluator,
    FaParams,
    Firefly,
    NonFiniteObjectiveError,
    ParameterError,
    ParameterWindowWarning,
    Problem,
    RngStream,
    clamp_to_bounds,
    evaluate,
)
from .engine import (
    EUCLIDEAN,
    HAMMING,
    DistanceMetric,
    Population,
    RunResult,
    Termination,
    alpha_schedule,
    attractiveness,
    estimate_gamma,
    move_firefly,
    pairwise_distance,
    run,
    step_generation,
)
from .benchmarks import BENCHMARK_NAMES, make_benchmark
from .diagnostics import (
    GLOBAL_VISIBILITY,
    detect_subswarms,
    influence_radius,
    mode_coverage,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "ConfigurationError",
    "DimensionError",
    "Evaluator",
    "FaParams",
    "Firefly",
    "NonFiniteObjectiveError",
    "ParameterError",
    "ParameterWindowWarning",
    "Problem",
    "RngStream",
    "clamp_to_bounds",
    "evaluate",
    "EUCLIDEAN",
    "HAMMING",
    "DistanceMetric",
    "Population",
    "RunResult",
    "Termination",
    "alpha_schedule",
    "attractiveness",
    "estimate_gamma",
    "move_firefly",
    "pairwise_distance",
    "run",
    "step_generation",
    "GLOBAL_VISIBILITY",
    "detect_subswarms",
    "influence_radius",
    "mode_coverage",
    "BENCHMARK_NAMES",
    "make_benchmark",
]
