"""Moving least-squares scattered-data approximation with data-dependent weights."""

from .errors import (
    DdmlsError,
    DimensionMismatch,
    DuplicatePoint,
    EmptyErrors,
    EmptyNodeSet,
    InsufficientNodes,
    NegativeRadius,
    NonFiniteInput,
    NonPositiveCellSize,
    NonPositiveDelta,
    NonPositiveInput,
    NonPositiveRadius,
    ParseError,
    RankDeficient,
    TooFewNodes,
    UnsupportedDimension,
)
from .geometry import NodeSet, SpatialIndex, ball_query, build_spatial_index, fill_distance_estimate
from .kernels import (
    KernelKind,
    WeightConfig,
    default_shape_eps,
    default_truncation,
    kernel_eval,
    support_radius,
    weight,
)
from .polybasis import BasisSpec, basis_size, eval_basis, eval_basis_many
from .smoothness import DdWeightParams, SmoothnessField, compute_indicators, dd_weight, default_delta
from .mls import MlsConfig, MlsSolution, evaluate_field, gather_active, solve_point, solve_weighted
from .datasets import (
    TestFunction,
    custom,
    eval_test_function,
    franke,
    g_levin,
    halton_points,
    load_csv,
    parse_test_function,
    piecewise_franke,
    regular_grid,
    sample,
    save_csv,
    z_circle,
)
from .harness import (
    ConvergenceTable,
    OscillationReport,
    StudyConfig,
    StudyRow,
    convergence_rate,
    error_metrics,
    eval_grid_points,
    oscillation_report,
    run_convergence_study,
)
from .estimator import MovingLeastSquares

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "ConvergenceTable",
    "DdWeightParams",
    "DdmlsError",
    "DimensionMismatch",
    "DuplicatePoint",
    "EmptyErrors",
    "EmptyNodeSet",
    "InsufficientNodes",
    "KernelKind",
    "MlsConfig",
    "MlsSolution",
    "MovingLeastSquares",
    "NegativeRadius",
    "NodeSet",
    "NonFiniteInput",
    "NonPositiveCellSize",
    "NonPositiveDelta",
    "NonPositiveInput",
    "NonPositiveRadius",
    "OscillationReport",
    "ParseError",
    "RankDeficient",
    "SmoothnessField",
    "SpatialIndex",
    "StudyConfig",
    "StudyRow",
    "TestFunction",
    "TooFewNodes",
    "UnsupportedDimension",
    "WeightConfig",
    "ball_query",
    "basis_size",
    "build_spatial_index",
    "compute_indicators",
    "convergence_rate",
    "custom",
    "dd_weight",
    "default_delta",
    "default_shape_eps",
    "default_truncation",
    "error_metrics",
    "eval_basis",
    "eval_basis_many",
    "eval_grid_points",
    "eval_test_function",
    "evaluate_field",
    "fill_distance_estimate",
    "franke",
    "g_levin",
    "gather_active",
    "halton_points",
    "kernel_eval",
    "load_csv",
    "oscillation_report",
    "parse_test_function",
    "piecewise_franke",
    "regular_grid",
    "run_convergence_study",
    "sample",
    "save_csv",
    "solve_point",
    "solve_weighted",
    "support_radius",
    "weight",
    "z_circle",
]
