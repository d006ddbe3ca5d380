"""Exact solvers and experiment drivers for random zero-sum matrix games.

The package computes values and optimal mixed strategies of finite
two-player zero-sum games by linear programming, samples payoff matrices
from several random ensembles under a reproducible counter-based seeding
scheme, and ships the estimators used to study how the value, the
strategy supports, and related convex-geometric quantities behave as the
matrix grows.
"""

from .cones import (
    CertifiedValue,
    IndeterminateIntersection,
    OrthantMinimaxOptions,
    ProjectionResult,
    StrategyNormSummary,
    cones_intersect,
    estimate_statistical_dimension,
    kinematic_threshold,
    orthant_minimax,
    project_cone,
    squared_distance_minorant,
    statistical_dimension_bound,
    strategy_norm_experiment,
)
from .ensembles import (
    BERNOULLI,
    GAUSSIAN,
    HAAR,
    RADEMACHER,
    EnsembleSpec,
    MatrixParseError,
    RandomSeed,
    derive_stream,
    matrix_from_csv,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    sample_gaussian,
    sample_gaussian_vector,
    sample_haar_orthogonal,
    sample_matrix,
)
from .simplex import SimplexFailure, SimplexResult, maximize
from .solver import (
    DegenerateGameError,
    GameSolution,
    Residuals,
    SolveOptions,
    SolverFailure,
    VerificationReport,
    pure_saddle,
    solve_by_support_enumeration,
    solve_game,
    value_symmetry_check,
    verify_solution,
)
from .stats import (
    CoverPoint,
    RectangularReport,
    SlopeFit,
    SummaryStats,
    SupportCompareReport,
    binomial_support_compare,
    chi_mean,
    cover_adjudication,
    cover_sign_probability,
    fit_log_slope,
    positive_part_norm_bounds,
    rectangular_value_report,
    summarize,
    uniform_strategy_tail_bound,
    value_variance_lower_bound,
)
from .surrogate import (
    ComparisonResult,
    EstimateOptions,
    WaterFillingResult,
    comparison_experiment,
    comparison_to_csv,
    solve_water_filling,
    surrogate_estimate,
    surrogate_inner_max,
    surrogate_lower_bound,
    surrogate_upper_bound,
    water_fill_level,
)

__version__ = "0.1.0"

__all__ = [
    "BERNOULLI",
    "GAUSSIAN",
    "HAAR",
    "RADEMACHER",
    "CertifiedValue",
    "ComparisonResult",
    "CoverPoint",
    "DegenerateGameError",
    "EnsembleSpec",
    "EstimateOptions",
    "GameSolution",
    "IndeterminateIntersection",
    "MatrixParseError",
    "OrthantMinimaxOptions",
    "ProjectionResult",
    "RandomSeed",
    "RectangularReport",
    "Residuals",
    "SimplexFailure",
    "SimplexResult",
    "SlopeFit",
    "SolveOptions",
    "SolverFailure",
    "StrategyNormSummary",
    "SummaryStats",
    "SupportCompareReport",
    "VerificationReport",
    "WaterFillingResult",
    "binomial_support_compare",
    "chi_mean",
    "comparison_experiment",
    "comparison_to_csv",
    "cones_intersect",
    "cover_adjudication",
    "cover_sign_probability",
    "derive_stream",
    "estimate_statistical_dimension",
    "fit_log_slope",
    "kinematic_threshold",
    "matrix_from_csv",
    "matrix_from_json",
    "matrix_to_csv",
    "matrix_to_json",
    "maximize",
    "orthant_minimax",
    "positive_part_norm_bounds",
    "project_cone",
    "pure_saddle",
    "rectangular_value_report",
    "sample_gaussian",
    "sample_gaussian_vector",
    "sample_haar_orthogonal",
    "sample_matrix",
    "solve_by_support_enumeration",
    "solve_game",
    "solve_water_filling",
    "squared_distance_minorant",
    "statistical_dimension_bound",
    "strategy_norm_experiment",
    "summarize",
    "surrogate_estimate",
    "surrogate_inner_max",
    "surrogate_lower_bound",
    "surrogate_upper_bound",
    "uniform_strategy_tail_bound",
    "value_symmetry_check",
    "value_variance_lower_bound",
    "verify_solution",
    "water_fill_level",
]
