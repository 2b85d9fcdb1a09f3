import math

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from core.accuracy.models import ScoreMoments
from core.errors import DimensionError, DomainError, FactorizationError


def score_moments(mu0, mu1, sigma, cycles: int) -> ScoreMoments:
    """
    Mean and spread of the averaged score s = w^T x_bar with w = Sigma^-1 (mu1 - mu0).

    m_y = (mu1 - mu0)^T Sigma^-1 mu_y and sigma_n = gamma / sqrt(n), so that
    (m1 - m0) / sigma_n = sqrt(n) * gamma.
    """
    mu0 = np.asarray(mu0, dtype=float).ravel()
    mu1 = np.asarray(mu1, dtype=float).ravel()
    sigma = np.asarray(sigma, dtype=float)
    if isinstance(cycles, bool) or int(cycles) != cycles or cycles < 1:
        raise DomainError(f"cycles must be a positive integer, got {cycles!r}")
    if mu0.shape != mu1.shape or sigma.shape != (mu0.size, mu0.size):
        raise DimensionError(
            f"mean vectors {mu0.shape}/{mu1.shape} do not match covariance {sigma.shape}"
        )

    try:
        factor = cho_factor(sigma, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise FactorizationError(f"covariance is not positive definite: {e}") from e

    weights = cho_solve(factor, mu1 - mu0)
    m0 = float(weights @ mu0)
    m1 = float(weights @ mu1)
    gamma_sq = max(m1 - m0, 0.0)
    if gamma_sq == 0.0:
        raise DomainError("mu1 equals mu0: the score distribution is degenerate (gamma = 0)")
    return ScoreMoments(m0=m0, m1=m1, sigma_n=math.sqrt(gamma_sq / cycles))
