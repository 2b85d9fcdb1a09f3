"""
Empirical symbol accuracy versus the number of averaging cycles.

Protocol: train LDA on the trials of n_train randomly chosen symbols, detect
every remaining symbol from its first n cycles for each n, repeat n_reps times
and average. Whole symbols go to one side of the split, never both.
"""
from typing import List, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from core.classifier.detection import detect_all
from core.classifier.lda import ShrinkagePolicy, fit_lda
from core.errors import DomainError, InsufficientDataError
from core.simulation.session import SessionData
from settings_config import Settings

SeedLike = Union[int, np.random.Generator, None]


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    accuracy: float
    se: float


class AccuracyCurve(BaseModel):
    """Accuracy per cycle count n = 1..cycles, with the training split of every repetition"""
    model_config = ConfigDict(frozen=True)

    accuracy_by_cycles: List[CurvePoint]
    n_train: int
    n_reps: int
    train_splits: List[List[int]] = []

    @classmethod
    def from_values(cls, accuracies, ses=None, n_train: int = 0, n_reps: int = 0) -> "AccuracyCurve":
        """A curve from plain per-n values (n starting at 1)"""
        accuracies = [float(a) for a in accuracies]
        ses = [0.0] * len(accuracies) if ses is None else [float(s) for s in ses]
        points = [CurvePoint(n=i + 1, accuracy=a, se=s) for i, (a, s) in enumerate(zip(accuracies, ses))]
        return cls(accuracy_by_cycles=points, n_train=n_train, n_reps=n_reps)

    @property
    def ns(self) -> np.ndarray:
        return np.array([p.n for p in self.accuracy_by_cycles], dtype=int)

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([p.accuracy for p in self.accuracy_by_cycles], dtype=float)

    @property
    def ses(self) -> np.ndarray:
        return np.array([p.se for p in self.accuracy_by_cycles], dtype=float)

    def at(self, n: int) -> CurvePoint:
        for point in self.accuracy_by_cycles:
            if point.n == n:
                return point
        raise DomainError(f"curve has no point for n={n}")


def seed_sequence(rng: SeedLike) -> np.random.SeedSequence:
    """A SeedSequence from an integer seed, a generator, or the configured default"""
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(0, 2 ** 63)))
    if rng is None:
        rng = Settings().simulation.seed
    return np.random.SeedSequence(int(rng))


def accuracy_vs_repetitions(
    session: SessionData,
    n_train: Optional[int] = None,
    n_reps: Optional[int] = None,
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
    rng: SeedLike = None,
    show_progress: Optional[bool] = None,
) -> AccuracyCurve:
    """
    Run the repeated train/test protocol on one session.

    Args:
        session: labeled session with more than n_train symbols
        n_train: symbols used for training in each repetition (default 10)
        n_reps: number of random splits (default 100)
        shrinkage_policy: ridge for the LDA fits
        rng: seed or generator; each repetition gets its own child stream
        show_progress: tqdm bar over repetitions

    Returns:
        AccuracyCurve with the mean accuracy over repetitions and the
        between-repetition standard error for each n
    """
    settings = Settings()
    n_train = settings.validation.n_train if n_train is None else int(n_train)
    n_reps = settings.validation.n_reps if n_reps is None else int(n_reps)
    show_progress = settings.show_progress if show_progress is None else show_progress
    policy = shrinkage_policy or ShrinkagePolicy.from_settings()

    n_symbols = session.config.n_symbols
    if n_train < 1 or n_reps < 1:
        raise DomainError(f"n_train and n_reps must be positive, got {n_train} and {n_reps}")
    if n_symbols <= n_train:
        raise InsufficientDataError(f"session has {n_symbols} symbols, need more than n_train={n_train}")

    generators = [np.random.Generator(np.random.PCG64(child)) for child in seed_sequence(rng).spawn(n_reps)]
    accuracy = np.empty((n_reps, session.config.cycles_per_symbol))
    splits = []
    for rep, rep_rng in enumerate(tqdm(generators, desc="validation", disable=not show_progress, leave=False)):
        order = rep_rng.permutation(n_symbols)
        train, test = np.sort(order[:n_train]), np.sort(order[n_train:])
        training = session.subset_symbols(train)
        est = fit_lda(training.features, training.labels, policy)
        accuracy[rep] = detect_all(est, session, test).mean(axis=0)
        splits.append(train.tolist())

    mean = accuracy.mean(axis=0)
    if n_reps == 1:
        logger.warning("a single repetition has no spread; standard errors are reported as 0")
    se = accuracy.std(axis=0, ddof=1) / np.sqrt(n_reps) if n_reps > 1 else np.zeros_like(mean)
    logger.info(
        f"validated {n_symbols} symbols over {n_reps} splits: "
        f"accuracy {mean[0]:.3f} at n=1, {mean[-1]:.3f} at n={mean.size}"
    )
    points = [CurvePoint(n=i + 1, accuracy=float(a), se=float(s)) for i, (a, s) in enumerate(zip(mean, se))]
    return AccuracyCurve(accuracy_by_cycles=points, n_train=n_train, n_reps=n_reps, train_splits=splits)
