"""Evaluation toolkit for biometric quality-assessment algorithms.

Computes error-versus-discard curves, pAUC rankings, quality-score
normalisation effects, ranking-stability grids and related metrics from
quality-score and comparison-score files.
"""

__version__ = "0.1.0"

from .edc import (  # noqa: E402
    EdcCurve,
    ErrorMode,
    compute_edc,
    curve_value_at,
    random_baseline,
    theoretical_best_error,
    threshold_for_fmr,
    threshold_for_starting_error,
)
from .pauc import (  # noqa: E402
    PaucConfig,
    RankingReport,
    area_under_theoretical_best,
    pauc,
    rank,
    upper_bound_pauc,
)
from .score_data import (  # noqa: E402
    Comparison,
    ComparisonSet,
    Kind,
    QualityScoreTable,
    load_comparisons,
    load_quality_scores,
    pairwise_min_qs,
    validate_dataset,
)

__all__ = [
    "Comparison", "ComparisonSet", "EdcCurve", "ErrorMode", "Kind", "PaucConfig",
    "QualityScoreTable", "RankingReport", "area_under_theoretical_best", "compute_edc",
    "curve_value_at", "load_comparisons", "load_quality_scores", "pairwise_min_qs", "pauc",
    "random_baseline", "rank", "theoretical_best_error", "threshold_for_fmr",
    "threshold_for_starting_error", "upper_bound_pauc", "validate_dataset",
]
