"""Pairwise-comparison decision engine with factor-rating vendor scoring."""

__version__ = "0.1.0"

from .core import (
    ComparisonMatrix,
    ConsistencyReport,
    Judgment,
    PriorityVector,
    SCALE_RELAXED,
    SCALE_STRICT,
    analyze,
    build_matrix,
    consistency_index,
    consistency_ratio,
    derive_priorities,
    lambda_max,
    principal_eigenvector,
    random_index,
)
from .hierarchy import (
    CriterionNode,
    Diagnostic,
    WeightTable,
    compute_global_weights,
    compute_local_weights,
    compute_weights,
    prioritize_leaves,
    validate_model,
)
from .model_io import (
    ModelDocument,
    blank_document,
    evaluate_document,
    load_model,
    load_template,
    save_model,
)
from .rating import (
    RankedResult,
    RatingSheet,
    ScoreBreakdown,
    breakdown_by_criterion,
    rank,
    score_alternative,
    whatif,
)
from .report import render_report

__all__ = [
    "ComparisonMatrix",
    "ConsistencyReport",
    "CriterionNode",
    "Diagnostic",
    "Judgment",
    "ModelDocument",
    "PriorityVector",
    "RankedResult",
    "RatingSheet",
    "SCALE_RELAXED",
    "SCALE_STRICT",
    "ScoreBreakdown",
    "WeightTable",
    "analyze",
    "blank_document",
    "breakdown_by_criterion",
    "build_matrix",
    "compute_global_weights",
    "compute_local_weights",
    "compute_weights",
    "consistency_index",
    "consistency_ratio",
    "derive_priorities",
    "evaluate_document",
    "lambda_max",
    "load_model",
    "load_template",
    "prioritize_leaves",
    "principal_eigenvector",
    "random_index",
    "rank",
    "render_report",
    "save_model",
    "score_alternative",
    "validate_model",
    "whatif",
    "__version__",
]
