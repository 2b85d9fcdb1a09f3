"""
Accuracy function H_N, its derivative, symbol accuracy and its inverse.
"""
from core.accuracy.accuracy_function import (
    accuracy_curve,
    accuracy_function,
    accuracy_function_derivative,
    accuracy_function_many,
    invert_accuracy,
    required_cycles,
    symbol_accuracy,
)
from core.accuracy.models import QuadratureConfig, ScoreMoments, SpellerGeometry
from core.accuracy.moments import score_moments

__all__ = [
    "QuadratureConfig",
    "ScoreMoments",
    "SpellerGeometry",
    "accuracy_curve",
    "accuracy_function",
    "accuracy_function_derivative",
    "accuracy_function_many",
    "invert_accuracy",
    "required_cycles",
    "score_moments",
    "symbol_accuracy",
]
