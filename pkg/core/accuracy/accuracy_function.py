"""
The accuracy function H_N(x) and the symbol selection accuracy built from it.

H_N(x) is the probability that a unit-variance Gaussian score with mean x beats
the maximum of N-1 independent standard normal scores:

    H_N(x) = integral of phi(z - x) * Phi(z)**(N-1) dz

A row/column speller selects row and column independently, so after n averaging
cycles at single-trial SNR gamma the symbol accuracy is
H_rows(sqrt(n) * gamma) * H_cols(sqrt(n) * gamma).
"""
import math
import numbers
from typing import Iterable, Optional

import numpy as np
from loguru import logger
from scipy.optimize import bisect
from scipy.special import log_ndtr

from core.accuracy.models import QuadratureConfig, SpellerGeometry
from core.accuracy.quadrature import composite_nodes
from core.errors import DomainError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

INVERSION_BRACKET = (0.0, 20.0)


def _check_alternatives(n_alternatives) -> int:
    if isinstance(n_alternatives, bool) or not isinstance(n_alternatives, numbers.Integral):
        raise DomainError(f"number of alternatives must be an integer, got {n_alternatives!r}")
    if n_alternatives < 2:
        raise DomainError(f"number of alternatives must be at least 2, got {n_alternatives}")
    return int(n_alternatives)


def _check_snr_values(effective_snr) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(effective_snr, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise DomainError("effective SNR must be finite")
    return xs


def _check_cycles(cycles) -> int:
    if isinstance(cycles, bool) or not isinstance(cycles, numbers.Integral) or cycles < 1:
        raise DomainError(f"cycles must be a positive integer, got {cycles!r}")
    return int(cycles)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 0:
        raise DomainError(f"gamma must be a finite non-negative SNR, got {gamma}")
    return gamma


def _normal_log_pdf(z: np.ndarray) -> np.ndarray:
    return -0.5 * z * z - _LOG_SQRT_2PI


def accuracy_function_many(
    n_alternatives: int,
    xs: Iterable[float],
    quad: Optional[QuadratureConfig] = None,
) -> np.ndarray:
    """
    Evaluate H_N at every effective SNR in xs.

    The window is the union of [-half_width, half_width] and
    [x - half_width, x + half_width]; Phi**(N-1) is taken in log space so large
    N never underflows mid-integrand.
    """
    n = _check_alternatives(n_alternatives)
    xs = _check_snr_values(xs)
    quad = quad or QuadratureConfig()
    hw = quad.half_width

    lower = np.minimum(-hw, xs - hw)
    upper = np.maximum(hw, xs + hw)
    z, w = composite_nodes(lower, upper, quad)

    log_integrand = _normal_log_pdf(z - xs[:, None]) + (n - 1) * log_ndtr(z)
    values = np.sum(w * np.exp(log_integrand), axis=1)
    return np.clip(values, 0.0, 1.0)


def accuracy_function(
    n_alternatives: int,
    effective_snr: float,
    quad: Optional[QuadratureConfig] = None,
) -> float:
    """Selection accuracy of one out of n_alternatives at effective SNR x"""
    if np.ndim(effective_snr) != 0:
        raise DomainError("effective_snr must be a scalar; use accuracy_function_many for arrays")
    return float(accuracy_function_many(n_alternatives, [effective_snr], quad)[0])


def accuracy_function_derivative(
    n_alternatives: int,
    effective_snr: float,
    quad: Optional[QuadratureConfig] = None,
) -> float:
    """
    dH_N/dx from the folded half-line form.

    Folding the derivative integral around the mean gives
        integral over y in [0, inf) of y * phi(y) * (Phi**(N-1)(x + y) - Phi**(N-1)(x - y)) dy
    where both factors are non-negative, which is why H_N is strictly increasing.
    The range is truncated at y = half_width.
    """
    if np.ndim(effective_snr) != 0:
        raise DomainError("effective_snr must be a scalar")
    n = _check_alternatives(n_alternatives)
    x = float(_check_snr_values(effective_snr)[0])
    quad = quad or QuadratureConfig()

    y, w = composite_nodes(np.array([0.0]), np.array([quad.half_width]), quad)
    y, w = y[0], w[0]

    log_upper = (n - 1) * log_ndtr(x + y)
    log_lower = (n - 1) * log_ndtr(x - y)
    # exp(a) - exp(b) = exp(a) * (1 - exp(b - a)), with b <= a
    power_gap = np.exp(log_upper) * -np.expm1(log_lower - log_upper)
    kernel = y * np.exp(_normal_log_pdf(y))
    return float(np.sum(w * kernel * power_gap))


def symbol_accuracy(
    geometry: SpellerGeometry,
    cycles: int,
    gamma: float,
    quad: Optional[QuadratureConfig] = None,
) -> float:
    """Predicted symbol selection accuracy after `cycles` averaging cycles"""
    cycles = _check_cycles(cycles)
    gamma = _check_gamma(gamma)
    x = math.sqrt(cycles) * gamma
    return accuracy_function(geometry.n_rows, x, quad) * accuracy_function(geometry.n_cols, x, quad)


def accuracy_curve(
    geometry: SpellerGeometry,
    gamma: float,
    cycles: Iterable[int],
    quad: Optional[QuadratureConfig] = None,
) -> np.ndarray:
    """symbol_accuracy for each cycle count in `cycles`"""
    counts = [_check_cycles(c) for c in cycles]
    gamma = _check_gamma(gamma)
    xs = np.sqrt(np.asarray(counts, dtype=float)) * gamma
    rows = accuracy_function_many(geometry.n_rows, xs, quad)
    if geometry.n_cols == geometry.n_rows:
        cols = rows
    else:
        cols = accuracy_function_many(geometry.n_cols, xs, quad)
    return rows * cols


def invert_accuracy(
    geometry: SpellerGeometry,
    cycles: int,
    target_accuracy: float,
    quad: Optional[QuadratureConfig] = None,
) -> float:
    """
    The single-trial SNR gamma that yields target_accuracy after `cycles` cycles.

    Bisection over gamma in [0, 20]; valid because symbol_accuracy is strictly
    increasing in gamma.
    """
    cycles = _check_cycles(cycles)
    target = float(target_accuracy)
    if not (geometry.chance < target < 1.0):
        raise DomainError(
            f"target accuracy must lie strictly between chance ({geometry.chance:.6g}) and 1, got {target}"
        )

    def residual(gamma: float) -> float:
        return symbol_accuracy(geometry, cycles, gamma, quad) - target

    low, high = INVERSION_BRACKET
    if residual(high) < 0:
        raise DomainError(f"target accuracy {target} is not reached for gamma <= {high}")

    gamma = bisect(residual, low, high, xtol=1e-12, rtol=1e-14, maxiter=200)
    logger.debug(f"inverted accuracy {target:.6g} at n={cycles} to gamma={gamma:.8g}")
    return float(gamma)


def required_cycles(
    geometry: SpellerGeometry,
    gamma: float,
    target_accuracy: float,
    max_cycles: int = 50,
    quad: Optional[QuadratureConfig] = None,
) -> Optional[int]:
    """Smallest n whose predicted accuracy reaches the target, or None within max_cycles"""
    max_cycles = _check_cycles(max_cycles)
    if not (0.0 < target_accuracy <= 1.0):
        raise DomainError(f"target accuracy must be in (0, 1], got {target_accuracy}")
    curve = accuracy_curve(geometry, gamma, range(1, max_cycles + 1), quad)
    reached = np.nonzero(curve >= target_accuracy)[0]
    if reached.size == 0:
        return None
    return int(reached[0]) + 1
