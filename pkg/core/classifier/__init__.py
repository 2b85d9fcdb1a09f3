"""
LDA training, scoring and averaged-signal symbol detection.
"""
from core.classifier.detection import (
    DetectionResult,
    average_stimulus_signals,
    averaged_scores,
    detect_all,
    detect_symbol,
)
from core.classifier.lda import (
    LdaEstimates,
    ShrinkagePolicy,
    fit_lda,
    fit_lda_from_trials,
    load_estimates,
    oracle_weights,
    save_estimates,
    score,
    score_many,
)

__all__ = [
    "DetectionResult",
    "LdaEstimates",
    "ShrinkagePolicy",
    "average_stimulus_signals",
    "averaged_scores",
    "detect_all",
    "detect_symbol",
    "fit_lda",
    "fit_lda_from_trials",
    "load_estimates",
    "oracle_weights",
    "save_estimates",
    "score",
    "score_many",
]
