"""
Fixed-header tables for harness results.

Headers are part of the CSV contract documented in docs/core/validation.md.
"""
from typing import Dict, Optional

import numpy as np
import pandas as pd

from core.accuracy.models import QuadratureConfig, SpellerGeometry
from core.validation.curves import AccuracyCurve
from core.validation.electrodes import SubsetRanking
from core.validation.fitting import FitResult, _predicted
from core.validation.regression import RegressionStats

CURVE_COLUMNS = ["n", "accuracy", "se", "predicted"]
REGRESSION_COLUMNS = ["proxy", "slope", "intercept", "pearson_r", "p_value", "n"]


def curve_table(
    curve: AccuracyCurve,
    fit: Optional[FitResult] = None,
    geometry: Optional[SpellerGeometry] = None,
    quad: Optional[QuadratureConfig] = None,
) -> pd.DataFrame:
    """n, accuracy, se and the accuracy predicted by the fitted gamma (NaN without a fit)"""
    ns = curve.ns
    if fit is not None and geometry is not None:
        predicted = _predicted(geometry, ns.astype(float), np.array([fit.gamma_fit]), quad or QuadratureConfig())[0]
    else:
        predicted = np.full(ns.size, np.nan)
    return pd.DataFrame(
        {"n": ns, "accuracy": curve.accuracies, "se": curve.ses, "predicted": predicted},
        columns=CURVE_COLUMNS,
    )


def ranking_table(ranking: SubsetRanking) -> pd.DataFrame:
    """
    One row per subset, in canonical order.

    Columns: subset (electrode indices joined by '-'), gamma_hat, then
    sqrt_n_gamma_hat_<n> and accuracy_<n> for each requested n.
    """
    rows = []
    for entry in ranking.entries:
        row = {"subset": "-".join(str(e) for e in entry.electrode_subset), "gamma_hat": entry.empirical_snr}
        for n in ranking.n_values:
            row[f"sqrt_n_gamma_hat_{n}"] = entry.scaled_snr_by_n[n]
        for n in ranking.n_values:
            row[f"accuracy_{n}"] = entry.validation_accuracy_by_n[n]
        rows.append(row)
    columns = (
        ["subset", "gamma_hat"]
        + [f"sqrt_n_gamma_hat_{n}" for n in ranking.n_values]
        + [f"accuracy_{n}" for n in ranking.n_values]
    )
    return pd.DataFrame(rows, columns=columns)


def regression_table(regressions: Dict[str, RegressionStats]) -> pd.DataFrame:
    rows = [{"proxy": name, **stats.model_dump()} for name, stats in regressions.items()]
    return pd.DataFrame(rows, columns=REGRESSION_COLUMNS)
