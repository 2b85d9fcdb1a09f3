"""
Speller sessions: configuration, single trials and the labeled trial set.

Stimulus ids put rows first (0 .. n_rows-1) and columns after them
(n_rows .. n_rows+n_cols-1). SessionData keeps trials as parallel arrays in
presentation order; ``trials`` gives the per-trial view.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.accuracy.models import SpellerGeometry
from core.errors import DataError, DimensionError


class SessionConfig(BaseModel):
    """Geometry, averaging cycles, symbol targets and seed of a session"""
    model_config = ConfigDict(frozen=True)

    geometry: SpellerGeometry = SpellerGeometry()
    cycles_per_symbol: int = 15
    symbols: List[Tuple[int, int]] = Field(default_factory=list)
    rng_seed: int = 0

    @field_validator("cycles_per_symbol")
    @classmethod
    def _check_cycles(cls, value: int) -> int:
        if value < 1:
            raise ValueError("cycles_per_symbol must be at least 1")
        return value

    @field_validator("rng_seed")
    @classmethod
    def _check_seed(cls, value: int) -> int:
        if value < 0:
            raise ValueError("rng_seed must be an unsigned integer")
        return value

    @model_validator(mode="after")
    def _check_targets(self) -> "SessionConfig":
        for row, col in self.symbols:
            if not (0 <= row < self.geometry.n_rows and 0 <= col < self.geometry.n_cols):
                raise ValueError(
                    f"target ({row}, {col}) outside a {self.geometry.n_rows}x{self.geometry.n_cols} matrix"
                )
        return self

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    @property
    def trials_per_symbol(self) -> int:
        return self.cycles_per_symbol * self.geometry.n_stimuli


class Trial(BaseModel):
    """One flash: its feature vector, label and position in the session"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    features: np.ndarray
    label: int
    stimulus_id: int
    cycle_index: int
    symbol_index: int


def random_symbols(geometry: SpellerGeometry, count: int, rng: np.random.Generator) -> List[Tuple[int, int]]:
    """Uniformly drawn (row, col) targets"""
    rows = rng.integers(0, geometry.n_rows, size=count)
    cols = rng.integers(0, geometry.n_cols, size=count)
    return [(int(r), int(c)) for r, c in zip(rows, cols)]


class SessionData(BaseModel):
    """
    A recorded or simulated session.

    Build through from_arrays or from_trials, which check the invariants: one
    trial per (symbol, cycle, stimulus), total trials = symbols * cycles *
    stimuli, and label = 1 exactly for the target row and column of each symbol.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: SessionConfig
    features: np.ndarray
    labels: np.ndarray
    stimulus_ids: np.ndarray
    cycle_indices: np.ndarray
    symbol_indices: np.ndarray
    electrode_count: Optional[int] = None

    def check_invariants(self) -> "SessionData":
        """Raise DataError or DimensionError when the session breaks its invariants"""
        cfg = self.config
        n_stim = cfg.geometry.n_stimuli
        expected = cfg.n_symbols * cfg.cycles_per_symbol * n_stim

        if self.features.ndim != 2:
            raise DimensionError(f"features must be a 2-D array, got shape {self.features.shape}")
        n_trials = self.features.shape[0]
        for name in ("labels", "stimulus_ids", "cycle_indices", "symbol_indices"):
            if getattr(self, name).shape != (n_trials,):
                raise DimensionError(f"{name} must have one entry per trial ({n_trials})")
        if n_trials != expected:
            raise DataError(
                f"session holds {n_trials} trials, expected {expected} "
                f"({cfg.n_symbols} symbols x {cfg.cycles_per_symbol} cycles x {n_stim} stimuli)"
            )
        if self.electrode_count is not None and (
            self.electrode_count < 1 or self.features.shape[1] % self.electrode_count
        ):
            raise DimensionError(
                f"feature dimension {self.features.shape[1]} is not split into {self.electrode_count} electrodes"
            )
        if n_trials == 0:
            return self

        sym, cyc, stim = self.symbol_indices, self.cycle_indices, self.stimulus_ids
        if (
            sym.min() < 0 or sym.max() >= cfg.n_symbols
            or cyc.min() < 0 or cyc.max() >= cfg.cycles_per_symbol
            or stim.min() < 0 or stim.max() >= n_stim
        ):
            raise DataError("trial metadata outside the session geometry")

        slots = (sym * cfg.cycles_per_symbol + cyc) * n_stim + stim
        if np.any(np.bincount(slots, minlength=expected) != 1):
            raise DataError("every stimulus must flash exactly once per symbol and cycle")

        row_stim, col_stim = self.target_stimuli()
        expected_labels = (stim == row_stim[sym]) | (stim == col_stim[sym])
        if np.any(expected_labels != (self.labels == 1)) or np.any((self.labels != 0) & (self.labels != 1)):
            raise DataError("labels do not match the symbol targets")
        return self

    @classmethod
    def from_arrays(
        cls,
        config: SessionConfig,
        features,
        labels,
        stimulus_ids,
        cycle_indices,
        symbol_indices,
        electrode_count: Optional[int] = None,
    ) -> "SessionData":
        def frozen(values, dtype):
            array = np.array(values, dtype=dtype, copy=True)
            array.setflags(write=False)
            return array

        features = np.asarray(features, dtype=float)
        if features.ndim == 1 and features.size == 0:
            features = features.reshape(0, 0)
        return cls(
            config=config,
            features=frozen(features, float),
            labels=frozen(labels, np.int64),
            stimulus_ids=frozen(stimulus_ids, np.int64),
            cycle_indices=frozen(cycle_indices, np.int64),
            symbol_indices=frozen(symbol_indices, np.int64),
            electrode_count=electrode_count,
        ).check_invariants()

    @classmethod
    def from_trials(
        cls,
        config: SessionConfig,
        trials: Sequence[Trial],
        dim: Optional[int] = None,
        electrode_count: Optional[int] = None,
    ) -> "SessionData":
        if trials:
            dims = {t.features.shape for t in trials}
            if len(dims) != 1:
                raise DimensionError(f"trials have mismatched feature shapes {sorted(dims)}")
            features = np.vstack([t.features for t in trials])
        else:
            features = np.zeros((0, dim or 0))
        return cls.from_arrays(
            config,
            features,
            [t.label for t in trials],
            [t.stimulus_id for t in trials],
            [t.cycle_index for t in trials],
            [t.symbol_index for t in trials],
            electrode_count=electrode_count,
        )

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_trials(self) -> int:
        return int(self.features.shape[0])

    @property
    def trials(self) -> List[Trial]:
        return [
            Trial(
                features=self.features[i],
                label=int(self.labels[i]),
                stimulus_id=int(self.stimulus_ids[i]),
                cycle_index=int(self.cycle_indices[i]),
                symbol_index=int(self.symbol_indices[i]),
            )
            for i in range(self.n_trials)
        ]

    def target_stimuli(self) -> Tuple[np.ndarray, np.ndarray]:
        """Row stimulus id and column stimulus id of every symbol"""
        n_rows = self.config.geometry.n_rows
        targets = np.asarray(self.config.symbols, dtype=np.int64).reshape(-1, 2)
        return targets[:, 0], n_rows + targets[:, 1]

    def as_tensor(self) -> np.ndarray:
        """Features arranged as (symbols, cycles, stimuli, D), indexed by stimulus id"""
        cfg = self.config
        order = np.lexsort((self.stimulus_ids, self.cycle_indices, self.symbol_indices))
        return self.features[order].reshape(
            cfg.n_symbols, cfg.cycles_per_symbol, cfg.geometry.n_stimuli, self.dim
        )

    def select_features(self, indices: Sequence[int], electrode_count: Optional[int] = None) -> "SessionData":
        """The same session restricted to the given feature columns"""
        indices = np.asarray(indices, dtype=np.int64)
        if indices.size and (indices.min() < 0 or indices.max() >= self.dim):
            raise DimensionError(f"feature indices outside 0..{self.dim - 1}")
        return SessionData.from_arrays(
            self.config,
            self.features[:, indices],
            self.labels,
            self.stimulus_ids,
            self.cycle_indices,
            self.symbol_indices,
            electrode_count=electrode_count,
        )

    def subset_symbols(self, symbol_indices: Sequence[int]) -> "SessionData":
        """A session holding only the given symbols, renumbered in the given order"""
        chosen = [int(s) for s in symbol_indices]
        if any(s < 0 or s >= self.config.n_symbols for s in chosen):
            raise DataError("symbol index outside the session")
        remap = np.full(self.config.n_symbols, -1, dtype=np.int64)
        remap[chosen] = np.arange(len(chosen))
        keep = remap[self.symbol_indices] >= 0
        config = self.config.model_copy(update={"symbols": [self.config.symbols[s] for s in chosen]})
        return SessionData.from_arrays(
            config,
            self.features[keep],
            self.labels[keep],
            self.stimulus_ids[keep],
            self.cycle_indices[keep],
            remap[self.symbol_indices[keep]],
            electrode_count=self.electrode_count,
        )
