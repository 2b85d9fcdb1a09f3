"""
Linear discriminant analysis for P300 detection.

w = (Sigma_hat + lambda I)^-1 (mu1_hat - mu0_hat), with Sigma_hat the pooled
within-class maximum-likelihood covariance. The score of a trial is s = w^T x.
There is no decision threshold: symbols are chosen by argmax over stimuli.
"""
import json
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from core.errors import (
    DataError,
    DimensionError,
    FactorizationError,
    InsufficientDataError,
    SessionFormatError,
)
from core.simulation.gaussian_model import GaussianP300Model
from settings_config import Settings


class ShrinkagePolicy(BaseModel):
    """Ridge added to Sigma_hat: a fixed lambda, or epsilon * trace(Sigma_hat) / D"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["fixed", "relative"] = "relative"
    value: float = 1e-6

    @field_validator("value")
    @classmethod
    def _check_value(cls, value: float) -> float:
        if not value >= 0:
            raise ValueError("shrinkage must be non-negative")
        return value

    @classmethod
    def fixed(cls, lam: float) -> "ShrinkagePolicy":
        return cls(kind="fixed", value=lam)

    @classmethod
    def relative(cls, epsilon: float) -> "ShrinkagePolicy":
        return cls(kind="relative", value=epsilon)

    @classmethod
    def from_settings(cls) -> "ShrinkagePolicy":
        settings = Settings()
        return cls(kind=settings.lda.shrinkage_kind, value=settings.lda.shrinkage_value)

    def resolve(self, sigma_hat: np.ndarray) -> float:
        if self.kind == "fixed":
            return float(self.value)
        dim = sigma_hat.shape[0]
        return float(self.value * np.trace(sigma_hat) / dim)


class LdaEstimates(BaseModel):
    """Everything the detector needs: class means, pooled covariance, w and the ridge used"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu0_hat: np.ndarray
    mu1_hat: np.ndarray
    sigma_hat: np.ndarray
    weights: np.ndarray
    shrinkage: float = 0.0

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])

    @property
    def mean_difference(self) -> np.ndarray:
        return self.mu1_hat - self.mu0_hat

    def regularized_covariance(self) -> np.ndarray:
        return self.sigma_hat + self.shrinkage * np.eye(self.dim)


def _factorize(matrix: np.ndarray, lam: float):
    try:
        return cho_factor(matrix, lower=True, check_finite=True)
    except (LinAlgError, ValueError) as e:
        raise FactorizationError(f"regularized covariance is not positive definite: {e}", lam=lam) from e


def fit_lda(
    features,
    labels,
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
) -> LdaEstimates:
    """
    Fit LDA on labeled single trials.

    Args:
        features: array of shape (N, D)
        labels: N binary labels (1 = target stimulus flashed)
        shrinkage_policy: ridge policy, default relative 1e-6

    Raises:
        InsufficientDataError: a class has fewer than 2 trials
        FactorizationError: Sigma_hat + lambda I cannot be factorized
    """
    policy = shrinkage_policy or ShrinkagePolicy()
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels).ravel()
    if x.ndim != 2 or x.shape[0] != y.size:
        raise DimensionError(f"features {x.shape} do not match {y.size} labels")
    if np.any((y != 0) & (y != 1)):
        raise DataError("labels must be 0 or 1")

    target = y == 1
    n1, n0 = int(target.sum()), int((~target).sum())
    if n1 < 2 or n0 < 2:
        raise InsufficientDataError(f"need at least 2 trials per class, got {n0} non-target and {n1} target")

    mu1_hat = x[target].mean(axis=0)
    mu0_hat = x[~target].mean(axis=0)
    centered = x - np.where(target[:, None], mu1_hat, mu0_hat)
    sigma_hat = centered.T @ centered / x.shape[0]

    lam = policy.resolve(sigma_hat)
    factor = _factorize(sigma_hat + lam * np.eye(x.shape[1]), lam)
    weights = cho_solve(factor, mu1_hat - mu0_hat)
    logger.debug(f"fitted LDA on {x.shape[0]} trials (D={x.shape[1]}, lambda={lam:.3g})")
    return LdaEstimates(
        mu0_hat=mu0_hat,
        mu1_hat=mu1_hat,
        sigma_hat=sigma_hat,
        weights=weights,
        shrinkage=lam,
    )


def fit_lda_from_trials(
    trials: Sequence[Tuple[Sequence[float], int]],
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
) -> LdaEstimates:
    """fit_lda on a list of (features, label) pairs"""
    vectors = [np.asarray(features, dtype=float).ravel() for features, _ in trials]
    sizes = {v.size for v in vectors}
    if len(sizes) > 1:
        raise DimensionError(f"trials have mismatched dimensions {sorted(sizes)}")
    if not vectors:
        raise InsufficientDataError("no trials to fit")
    return fit_lda(np.vstack(vectors), [label for _, label in trials], shrinkage_policy)


def score(est: LdaEstimates, x) -> float:
    """s = w^T x"""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != est.dim:
        raise DimensionError(f"trial has {x.size} features, classifier expects {est.dim}")
    return float(est.weights @ x)


def score_many(est: LdaEstimates, features) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != est.dim:
        raise DimensionError(f"features {features.shape} do not match classifier dimension {est.dim}")
    return features @ est.weights


def oracle_weights(model: GaussianP300Model) -> LdaEstimates:
    """Bayes-optimal LDA from the true parameters: w = Sigma^-1 (mu1 - mu0)"""
    weights = cho_solve((model.chol_lower, True), model.mean_difference)
    return LdaEstimates(
        mu0_hat=model.mu0.copy(),
        mu1_hat=model.mu1.copy(),
        sigma_hat=model.sigma.copy(),
        weights=weights,
        shrinkage=0.0,
    )


class LdaArtifact(BaseModel):
    """On-disk JSON form of LdaEstimates"""
    format: Literal["p300-lda"] = "p300-lda"
    version: int = 1
    dim: int
    shrinkage: float
    mu0_hat: List[float]
    mu1_hat: List[float]
    weights: List[float]
    sigma_hat: List[List[float]]


def save_estimates(est: LdaEstimates, path: Union[str, Path]) -> Path:
    """Write estimates as JSON; floats keep their shortest round-trip representation"""
    artifact = LdaArtifact(
        dim=est.dim,
        shrinkage=est.shrinkage,
        mu0_hat=est.mu0_hat.tolist(),
        mu1_hat=est.mu1_hat.tolist(),
        weights=est.weights.tolist(),
        sigma_hat=est.sigma_hat.tolist(),
    )
    path = Path(path)
    path.write_text(artifact.model_dump_json(indent=2))
    return path


def load_estimates(path: Union[str, Path]) -> LdaEstimates:
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise SessionFormatError.from_decode_error("LDA artifact is not UTF-8", data, e) from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SessionFormatError(f"malformed LDA artifact: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        artifact = LdaArtifact.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise SessionFormatError(f"invalid LDA artifact: {first['msg']}", field=field) from e

    try:
        sigma_hat = np.asarray(artifact.sigma_hat, dtype=float).reshape(artifact.dim, artifact.dim)
    except ValueError as e:
        raise SessionFormatError("sigma_hat is not a square matrix of the declared dimension", field="sigma_hat") from e
    vectors = [np.asarray(v, dtype=float) for v in (artifact.mu0_hat, artifact.mu1_hat, artifact.weights)]
    if any(v.size != artifact.dim for v in vectors) or sigma_hat.shape != (artifact.dim, artifact.dim):
        raise SessionFormatError("LDA artifact arrays disagree with its declared dimension", field="dim")
    return LdaEstimates(
        mu0_hat=vectors[0],
        mu1_hat=vectors[1],
        sigma_hat=sigma_hat,
        weights=vectors[2],
        shrinkage=artifact.shrinkage,
    )
