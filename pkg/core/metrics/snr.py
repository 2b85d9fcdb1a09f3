"""
Empirical SNR and the amplitude-based proxies it is compared against.

gamma_hat uses the same regularized covariance as the fitted classifier, so the
reported SNR describes the classifier actually deployed. The proxies work on the
concatenated feature vector (all electrodes).
"""
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.linalg import LinAlgError, cho_factor, solve_triangular

from core.classifier.lda import LdaEstimates
from core.errors import FactorizationError


class SnrReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    empirical_snr: float
    peak_to_peak_v1: float
    peak_to_peak_v2: float
    area_under_curve: float
    shrinkage_used: float


def empirical_snr(est: LdaEstimates) -> float:
    """gamma_hat = sqrt(d^T (Sigma_hat + lambda I)^-1 d), d = mu1_hat - mu0_hat"""
    try:
        lower, _ = cho_factor(est.regularized_covariance(), lower=True, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise FactorizationError(f"cannot factorize the regularized covariance: {e}", lam=est.shrinkage) from e
    whitened = solve_triangular(lower, est.mean_difference, lower=True)
    return float(math.sqrt(float(whitened @ whitened)))


def peak_to_peak_v1(est: LdaEstimates) -> float:
    """max(mu1_hat - mu0_hat)"""
    return float(np.max(est.mean_difference))


def peak_to_peak_v2(est: LdaEstimates) -> float:
    """max(mu1_hat) - max(mu0_hat)"""
    return float(np.max(est.mu1_hat) - np.max(est.mu0_hat))


def area_under_curve(est: LdaEstimates) -> float:
    """sum(mu1_hat - mu0_hat)"""
    return float(np.sum(est.mean_difference))


def snr_report(est: LdaEstimates) -> SnrReport:
    return SnrReport(
        empirical_snr=empirical_snr(est),
        peak_to_peak_v1=peak_to_peak_v1(est),
        peak_to_peak_v2=peak_to_peak_v2(est),
        area_under_curve=area_under_curve(est),
        shrinkage_used=est.shrinkage,
    )
