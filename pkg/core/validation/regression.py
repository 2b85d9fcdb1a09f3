import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import betainc

from core.errors import DataError, InsufficientDataError


class RegressionStats(BaseModel):
    """Ordinary least squares line with Pearson r and its two-sided p-value"""
    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    pearson_r: float
    p_value: float
    n: int


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> RegressionStats:
    """
    Fit ys = slope * xs + intercept.

    The p-value tests r = 0 with the t statistic on n - 2 degrees of freedom,
    evaluated through the regularized incomplete beta function:
    p = I_{1 - r^2}((n - 2) / 2, 1 / 2).
    """
    x = np.asarray(xs, dtype=float).ravel()
    y = np.asarray(ys, dtype=float).ravel()
    if x.size != y.size:
        raise DataError(f"xs has {x.size} points but ys has {y.size}")
    if x.size < 3:
        raise InsufficientDataError(f"linear fit needs at least 3 points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DataError("regression inputs must be finite")

    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    sxy = float(dx @ dy)
    if sxx <= 1e-24 * max(1.0, float(x @ x)):
        raise DataError("xs are all equal; the regression is degenerate")

    slope = sxy / sxx
    intercept = float(y.mean() - slope * x.mean())
    if syy == 0.0:
        return RegressionStats(slope=slope, intercept=intercept, pearson_r=0.0, p_value=1.0, n=int(x.size))

    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    df = x.size - 2
    p = float(betainc(0.5 * df, 0.5, 1.0 - r * r))
    p = min(1.0, max(p, np.finfo(float).tiny))
    return RegressionStats(slope=slope, intercept=intercept, pearson_r=r, p_value=p, n=int(x.size))
