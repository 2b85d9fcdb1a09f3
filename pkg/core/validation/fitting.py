"""
Best-fit single-trial SNR for an empirical accuracy curve.

The squared error between the curve and symbol_accuracy(geometry, n, gamma) is
minimized over a coarse gamma grid, then refined by a bounded scalar minimization
over the grid cells around the best grid point.
"""
from typing import Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize_scalar

from core.accuracy.accuracy_function import accuracy_function_many
from core.accuracy.models import QuadratureConfig, SpellerGeometry
from core.errors import DataError
from core.validation.curves import AccuracyCurve
from settings_config import Settings


class FitResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma_fit: float
    sse: float


def _predicted(geometry: SpellerGeometry, ns: np.ndarray, gammas: np.ndarray, quad: QuadratureConfig) -> np.ndarray:
    """symbol_accuracy for every (gamma, n) pair, shape (len(gammas), len(ns))"""
    xs = (np.sqrt(ns)[None, :] * gammas[:, None]).ravel()
    rows = accuracy_function_many(geometry.n_rows, xs, quad)
    cols = rows if geometry.n_cols == geometry.n_rows else accuracy_function_many(geometry.n_cols, xs, quad)
    return (rows * cols).reshape(gammas.size, ns.size)


def fit_gamma(
    curve: AccuracyCurve,
    geometry: SpellerGeometry,
    quad: Optional[QuadratureConfig] = None,
    gamma_max: Optional[float] = None,
    grid_step: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> FitResult:
    """
    The gamma minimizing sum_n (accuracy(n) - symbol_accuracy(geometry, n, gamma))**2.

    gamma = 0 is always feasible, so every non-empty curve has a fit.
    """
    settings = Settings()
    quad = quad or QuadratureConfig()
    gamma_max = settings.validation.gamma_max if gamma_max is None else gamma_max
    grid_step = settings.validation.grid_step if grid_step is None else grid_step
    tolerance = settings.validation.tolerance if tolerance is None else tolerance

    if not curve.accuracy_by_cycles:
        raise DataError("cannot fit an empty accuracy curve")
    ns = curve.ns.astype(float)
    observed = curve.accuracies

    def sse(gamma: float) -> float:
        predicted = _predicted(geometry, ns, np.array([gamma]), quad)[0]
        return float(np.sum((observed - predicted) ** 2))

    grid = np.linspace(0.0, gamma_max, int(round(gamma_max / grid_step)) + 1)
    grid_sse = np.sum((_predicted(geometry, ns, grid, quad) - observed[None, :]) ** 2, axis=1)
    best = int(np.argmin(grid_sse))
    if best == grid.size - 1:
        logger.warning(f"best fit sits at the grid edge gamma={gamma_max}; the curve may be saturated")

    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, grid.size - 1)]
    refined, refined_sse = float(grid[best]), float(grid_sse[best])
    if high > low:
        # bounded Brent: golden-section steps with parabolic interpolation
        result = minimize_scalar(sse, bounds=(low, high), method="bounded", options={"xatol": tolerance})
        refined, refined_sse = float(result.x), float(result.fun)

    if refined_sse <= grid_sse[best]:
        gamma_fit, residual = refined, refined_sse
    else:
        gamma_fit, residual = float(grid[best]), float(grid_sse[best])
    logger.debug(f"fit gamma={gamma_fit:.6f} (sse={residual:.3g}) over {ns.size} cycle counts")
    return FitResult(gamma_fit=float(gamma_fit), sse=float(residual))
