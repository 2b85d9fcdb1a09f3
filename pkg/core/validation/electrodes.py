"""
Brute-force electrode subset ranking.

Every subset of `keep` electrodes is scored twice: by the empirical SNR of an
LDA fit on all its data (one fit), and by the full repeated-split validation
(n_reps fits). Comparing the two rankings shows whether the cheap SNR can stand
in for validation when choosing electrodes.
"""
import itertools
import math
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from core.classifier.lda import ShrinkagePolicy, fit_lda
from core.errors import DomainError, LayoutError
from core.metrics.snr import empirical_snr
from core.simulation.session import SessionData
from core.validation.curves import SeedLike, accuracy_vs_repetitions, seed_sequence
from settings_config import Settings


class SubsetEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    electrode_subset: Tuple[int, ...]
    empirical_snr: float
    scaled_snr_by_n: Dict[int, float]
    validation_accuracy_by_n: Dict[int, float]
    validation_se_by_n: Dict[int, float]


class SubsetRanking(BaseModel):
    """Subsets in canonical (lexicographic) order, plus the time each scoring method took"""
    model_config = ConfigDict(frozen=True)

    entries: List[SubsetEntry]
    n_values: List[int]
    snr_seconds: float
    validation_seconds: float

    def by_snr(self) -> List[SubsetEntry]:
        return sorted(self.entries, key=lambda e: e.empirical_snr, reverse=True)

    def by_accuracy(self, n: int) -> List[SubsetEntry]:
        return sorted(self.entries, key=lambda e: e.validation_accuracy_by_n[n], reverse=True)


def electrode_columns(electrodes: Sequence[int], samples_per_electrode: int) -> np.ndarray:
    """Feature indices of the given electrode blocks in an electrode-major vector"""
    return np.concatenate(
        [np.arange(e * samples_per_electrode, (e + 1) * samples_per_electrode) for e in electrodes]
    )


def rank_electrode_subsets(
    session: SessionData,
    electrode_count: int,
    keep: int,
    n_values: Sequence[int],
    shrinkage_policy: Optional[ShrinkagePolicy] = None,
    rng: SeedLike = None,
    n_train: Optional[int] = None,
    n_reps: Optional[int] = None,
    show_progress: Optional[bool] = None,
) -> SubsetRanking:
    """
    Evaluate every `keep`-of-`electrode_count` subset by empirical SNR and by validation.

    Every subset is validated with the same seed, so all subsets see the same
    train/test splits.

    Raises:
        LayoutError: the feature dimension is not electrode_count equal blocks
        DomainError: keep or n_values out of range
    """
    settings = Settings()
    show_progress = settings.show_progress if show_progress is None else show_progress
    policy = shrinkage_policy or ShrinkagePolicy.from_settings()

    if electrode_count < 1 or session.dim % electrode_count:
        raise LayoutError(
            f"feature dimension {session.dim} cannot be split into {electrode_count} equal electrode blocks"
        )
    if not 1 <= keep < electrode_count:
        raise DomainError(f"keep must be within 1..{electrode_count - 1}, got {keep}")
    cycles = session.config.cycles_per_symbol
    n_values = sorted({int(n) for n in n_values})
    if not n_values or n_values[0] < 1 or n_values[-1] > cycles:
        raise DomainError(f"n values must lie within 1..{cycles}")

    samples = session.dim // electrode_count
    seed = int(seed_sequence(rng).generate_state(1)[0])
    subsets = list(itertools.combinations(range(electrode_count), keep))

    entries = []
    snr_seconds = 0.0
    validation_seconds = 0.0
    for subset in tqdm(subsets, desc="electrode subsets", disable=not show_progress, leave=False):
        sub = session.select_features(electrode_columns(subset, samples), electrode_count=keep)

        started = time.perf_counter()
        gamma_hat = empirical_snr(fit_lda(sub.features, sub.labels, policy))
        snr_seconds += time.perf_counter() - started

        started = time.perf_counter()
        curve = accuracy_vs_repetitions(sub, n_train, n_reps, policy, rng=seed, show_progress=False)
        validation_seconds += time.perf_counter() - started

        entries.append(
            SubsetEntry(
                electrode_subset=tuple(subset),
                empirical_snr=gamma_hat,
                scaled_snr_by_n={n: math.sqrt(n) * gamma_hat for n in n_values},
                validation_accuracy_by_n={n: curve.at(n).accuracy for n in n_values},
                validation_se_by_n={n: curve.at(n).se for n in n_values},
            )
        )

    logger.info(
        f"ranked {len(subsets)} subsets of {keep}/{electrode_count} electrodes: "
        f"SNR {snr_seconds:.3f}s, validation {validation_seconds:.3f}s"
    )
    return SubsetRanking(
        entries=entries,
        n_values=n_values,
        snr_seconds=snr_seconds,
        validation_seconds=validation_seconds,
    )
