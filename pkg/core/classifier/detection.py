"""
Symbol detection from averaged stimulus signals.

For each stimulus the trials of the first n cycles are averaged, the averages
are scored, and the symbol is the intersection of the best row and best column.
Ties go to the lowest stimulus index.
"""
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.classifier.lda import LdaEstimates, score_many
from core.errors import DimensionError, DomainError
from core.simulation.session import SessionData


class DetectionResult(BaseModel):
    """Detected (row, col) and the scores they were chosen from"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    row: int
    col: int
    row_scores: np.ndarray
    col_scores: np.ndarray


def _check_symbol(session: SessionData, symbol_index: int) -> None:
    if not 0 <= symbol_index < session.config.n_symbols:
        raise DomainError(f"symbol index {symbol_index} outside 0..{session.config.n_symbols - 1}")


def _check_cycles(session: SessionData, use_cycles: int) -> None:
    if not 1 <= use_cycles <= session.config.cycles_per_symbol:
        raise DomainError(
            f"use_cycles must be within 1..{session.config.cycles_per_symbol}, got {use_cycles}"
        )


def average_stimulus_signals(session: SessionData, symbol_index: int, use_cycles: int) -> np.ndarray:
    """
    Mean trial of every stimulus over the first use_cycles cycles of a symbol.

    Returns:
        array of shape (n_rows + n_cols, D), row k belonging to stimulus id k
    """
    _check_symbol(session, symbol_index)
    _check_cycles(session, use_cycles)
    mask = (session.symbol_indices == symbol_index) & (session.cycle_indices < use_cycles)
    averages = np.zeros((session.config.geometry.n_stimuli, session.dim))
    np.add.at(averages, session.stimulus_ids[mask], session.features[mask])
    return averages / use_cycles


def detect_symbol(
    est: LdaEstimates,
    session: SessionData,
    symbol_index: int,
    use_cycles: int,
) -> DetectionResult:
    """Score each stimulus average and pick the best row and the best column"""
    if est.dim != session.dim:
        raise DimensionError(f"classifier dimension {est.dim} does not match session dimension {session.dim}")
    scores = score_many(est, average_stimulus_signals(session, symbol_index, use_cycles))
    n_rows = session.config.geometry.n_rows
    row_scores, col_scores = scores[:n_rows], scores[n_rows:]
    # np.argmax returns the first maximum, i.e. the lowest index on ties
    return DetectionResult(
        row=int(np.argmax(row_scores)),
        col=int(np.argmax(col_scores)),
        row_scores=row_scores,
        col_scores=col_scores,
    )


def averaged_scores(est: LdaEstimates, session: SessionData) -> np.ndarray:
    """
    Scores of the running stimulus averages for every symbol and every n.

    Uses linearity of the score: the score of an n-cycle average equals the
    average of the n single-trial scores.

    Returns:
        array of shape (symbols, cycles, stimuli); entry [s, n-1, k] scores the
        average of stimulus k over the first n cycles of symbol s
    """
    if est.dim != session.dim:
        raise DimensionError(f"classifier dimension {est.dim} does not match session dimension {session.dim}")
    cfg = session.config
    tensor = session.as_tensor()
    trial_scores = score_many(est, tensor.reshape(-1, session.dim)).reshape(tensor.shape[:3])
    counts = np.arange(1, cfg.cycles_per_symbol + 1)[None, :, None]
    return np.cumsum(trial_scores, axis=1) / counts


def detect_all(
    est: LdaEstimates,
    session: SessionData,
    symbol_indices: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """
    Correctness of detection for every requested symbol and every n.

    Returns:
        boolean array of shape (len(symbol_indices), cycles); entry [i, n-1] is
        True when symbol symbol_indices[i] is detected correctly from n cycles
    """
    scores = averaged_scores(est, session)
    row_stim, col_stim = session.target_stimuli()
    if symbol_indices is not None:
        chosen = np.asarray(symbol_indices, dtype=np.int64)
        scores, row_stim, col_stim = scores[chosen], row_stim[chosen], col_stim[chosen]
    n_rows = session.config.geometry.n_rows
    rows = np.argmax(scores[:, :, :n_rows], axis=2)
    cols = np.argmax(scores[:, :, n_rows:], axis=2) + n_rows
    return (rows == row_stim[:, None]) & (cols == col_stim[:, None])
