"""
Validation harness: accuracy curves, best-fit SNR, regressions and electrode ranking.
"""
from core.validation.curves import AccuracyCurve, CurvePoint, accuracy_vs_repetitions, seed_sequence
from core.validation.electrodes import SubsetEntry, SubsetRanking, electrode_columns, rank_electrode_subsets
from core.validation.fitting import FitResult, fit_gamma
from core.validation.proxies import (
    PROXY_COLUMNS,
    ProxyComparison,
    SnrFitRelation,
    proxy_accuracy_comparison,
    snr_fit_relation,
)
from core.validation.regression import RegressionStats, linear_fit
from core.validation.tables import curve_table, ranking_table, regression_table

__all__ = [
    "AccuracyCurve",
    "CurvePoint",
    "FitResult",
    "PROXY_COLUMNS",
    "ProxyComparison",
    "RegressionStats",
    "SnrFitRelation",
    "SubsetEntry",
    "SubsetRanking",
    "accuracy_vs_repetitions",
    "curve_table",
    "electrode_columns",
    "fit_gamma",
    "linear_fit",
    "proxy_accuracy_comparison",
    "rank_electrode_subsets",
    "ranking_table",
    "regression_table",
    "seed_sequence",
    "snr_fit_relation",
]
