"""
Ground-truth Gaussian model of single-trial responses.

A trial is mu_1 + z when the flashed row/column contains the target and mu_0 + z
otherwise, with z ~ N(0, Sigma) independent across trials.
"""
import math
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from scipy.linalg import lapack, solve_triangular

from core.errors import DimensionError, DomainError, ModelConstructionError

SYMMETRY_TOLERANCE = 1e-10


class CovarianceStructure(str, Enum):
    IDENTITY = "identity"
    AR1 = "ar1"


class GaussianP300Model(BaseModel):
    """Immutable model: class means, noise covariance and its cached lower Cholesky factor"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu0: np.ndarray
    mu1: np.ndarray
    sigma: np.ndarray
    chol_lower: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.mu0.shape[0])

    @property
    def mean_difference(self) -> np.ndarray:
        return self.mu1 - self.mu0

    def mean(self, is_target: bool) -> np.ndarray:
        return self.mu1 if is_target else self.mu0


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


def build_model(mu0, mu1, sigma) -> GaussianP300Model:
    """
    Validate the parameters and cache the Cholesky factor of sigma.

    Raises:
        ModelConstructionError: dimensions disagree, sigma is asymmetric, or a
            leading minor of sigma is not positive (reported by its order).
    """
    mu0 = np.asarray(mu0, dtype=float).ravel()
    mu1 = np.asarray(mu1, dtype=float).ravel()
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))

    if mu0.shape != mu1.shape:
        raise ModelConstructionError(f"mu0 has {mu0.size} entries but mu1 has {mu1.size}")
    if sigma.shape != (mu0.size, mu0.size):
        raise ModelConstructionError(f"sigma has shape {sigma.shape}, expected {(mu0.size, mu0.size)}")
    if not (np.all(np.isfinite(mu0)) and np.all(np.isfinite(mu1)) and np.all(np.isfinite(sigma))):
        raise ModelConstructionError("model parameters must be finite")

    scale = max(float(np.max(np.abs(sigma))), 1.0) if sigma.size else 1.0
    asymmetry = float(np.max(np.abs(sigma - sigma.T))) if sigma.size else 0.0
    if asymmetry > SYMMETRY_TOLERANCE * scale:
        raise ModelConstructionError(f"sigma is not symmetric (max |s_ij - s_ji| = {asymmetry:.3g})")

    factor, info = lapack.dpotrf(sigma, lower=1, clean=1)
    if info > 0:
        raise ModelConstructionError(
            f"sigma is not positive definite: leading minor of order {info} is not positive",
            leading_minor=int(info),
        )
    if info < 0:
        raise ModelConstructionError(f"Cholesky factorization rejected argument {-info}")

    return GaussianP300Model(
        mu0=_readonly(mu0),
        mu1=_readonly(mu1),
        sigma=_readonly(sigma),
        chol_lower=_readonly(np.tril(factor)),
    )


def theoretical_snr(model: GaussianP300Model) -> float:
    """gamma = sqrt((mu1 - mu0)^T Sigma^-1 (mu1 - mu0)), via a triangular solve"""
    whitened = solve_triangular(model.chol_lower, model.mean_difference, lower=True)
    return float(np.linalg.norm(whitened))


def ar1_covariance(dim: int, rho: float) -> np.ndarray:
    """Unit-variance AR(1) covariance rho**|i - j|"""
    lags = np.abs(np.subtract.outer(np.arange(dim), np.arange(dim)))
    return np.power(float(rho), lags)


def make_synthetic_model(
    dim: int,
    gamma: float,
    structure: Union[CovarianceStructure, str] = CovarianceStructure.IDENTITY,
    rho: float = 0.0,
    rng: Optional[Union[np.random.Generator, int]] = None,
    support: Optional[Sequence[int]] = None,
) -> GaussianP300Model:
    """
    A model with a random mean-difference direction rescaled to SNR exactly gamma.

    Args:
        dim: feature dimension D
        gamma: target single-trial SNR
        structure: identity or AR(1) noise covariance
        rho: AR(1) correlation, |rho| < 1
        rng: generator or seed for the direction
        support: feature indices allowed to carry signal (all when None)
    """
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise DomainError(f"dim must be a positive integer, got {dim!r}")
    dim = int(dim)
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    structure = CovarianceStructure(structure)
    if structure is CovarianceStructure.AR1:
        if not abs(rho) < 1:
            raise DomainError(f"AR(1) correlation must satisfy |rho| < 1, got {rho}")
        sigma = ar1_covariance(dim, rho)
    else:
        sigma = np.eye(dim)

    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    mu0 = np.zeros(dim)
    direction = rng.standard_normal(dim)
    if support is not None:
        mask = np.zeros(dim, dtype=bool)
        try:
            mask[np.asarray(list(support), dtype=int)] = True
        except IndexError as e:
            raise DimensionError(f"support indices outside 0..{dim - 1}") from e
        direction = np.where(mask, direction, 0.0)

    model = build_model(mu0, mu0, sigma)
    if gamma == 0.0:
        return model

    raw = build_model(mu0, direction, sigma)
    raw_snr = theoretical_snr(raw)
    if raw_snr == 0.0:
        raise DomainError("support is empty; no feature can carry the signal")
    mu1 = direction * (gamma / raw_snr)
    logger.debug(f"synthetic model: dim={dim}, gamma={gamma}, structure={structure.value}")
    return build_model(mu0, mu1, sigma)
