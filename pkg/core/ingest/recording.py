"""
Recorded sessions: continuous channels with flash events, cut into epochs.

Channels are assumed already band-pass and notch filtered. Epochs are
anchored at each event's sample index, downsampled by block averaging and
concatenated electrode-major into one feature vector per flash.
"""
import math
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.accuracy.models import SpellerGeometry
from core.errors import DataError, DomainError, LayoutError
from core.simulation.session import SessionConfig, SessionData, Trial
from settings_config import Settings


class Event(BaseModel):
    """A flash onset in the continuous recording"""
    model_config = ConfigDict(frozen=True)

    sample_index: int
    stimulus_id: int
    is_target: bool
    symbol_index: int
    cycle_index: int


class RawRecording(BaseModel):
    """Continuous signal, E channels by S samples, in microvolts"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sample_rate: float
    channels: np.ndarray
    events: List[Event] = Field(default_factory=list)

    @field_validator("channels", mode="before")
    @classmethod
    def _check_channels(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if value.ndim != 2:
            raise ValueError(f"channels must be an E x S matrix, got shape {value.shape}")
        return value

    @property
    def n_channels(self) -> int:
        return int(self.channels.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.channels.shape[1])


class EpochConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_ms: float = 600.0
    downsample_factor: int = 4
    electrode_order: Optional[List[int]] = None

    @field_validator("window_ms")
    @classmethod
    def _check_window(cls, value: float) -> float:
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"window_ms must be a positive duration, got {value}")
        return value

    @field_validator("downsample_factor")
    @classmethod
    def _check_factor(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"downsample_factor must be at least 1, got {value}")
        return value

    @classmethod
    def from_settings(cls, electrode_order: Optional[Sequence[int]] = None) -> "EpochConfig":
        settings = Settings()
        return cls(
            window_ms=settings.ingest.window_ms,
            downsample_factor=settings.ingest.downsample_factor,
            electrode_order=None if electrode_order is None else list(electrode_order),
        )

    def samples_per_epoch(self, sample_rate: float) -> int:
        """Samples covering the window at the downsampled rate, rounded up (600 ms at 64 Hz -> 39)"""
        if not sample_rate > 0:
            raise DomainError(f"sample rate must be positive, got {sample_rate}")
        rate = sample_rate / self.downsample_factor
        return max(1, math.ceil(self.window_ms * rate / 1000.0 - 1e-9))


def downsample(raw: RawRecording, factor: int) -> RawRecording:
    """
    Average each run of `factor` consecutive samples.

    Trailing samples that do not fill a block are dropped; event sample
    indices are divided by the factor and floored.
    """
    if factor < 1:
        raise DomainError(f"downsample factor must be at least 1, got {factor}")
    if factor == 1:
        return raw
    if raw.sample_rate % factor:
        raise DomainError(f"sample rate {raw.sample_rate} Hz is not divisible by {factor}")

    blocks = raw.n_samples // factor
    averaged = raw.channels[:, : blocks * factor].reshape(raw.n_channels, blocks, factor).mean(axis=2)
    events = [e.model_copy(update={"sample_index": e.sample_index // factor}) for e in raw.events]
    return RawRecording(sample_rate=raw.sample_rate / factor, channels=averaged, events=events)


def extract_epochs(raw: RawRecording, cfg: Optional[EpochConfig] = None) -> List[Trial]:
    """
    Downsample, then cut one electrode-major feature vector per event.

    Windows may overlap. An event whose window leaves the recording raises
    DataError naming the event.
    """
    cfg = cfg or EpochConfig.from_settings()
    order = list(range(raw.n_channels)) if cfg.electrode_order is None else list(cfg.electrode_order)
    if not order or min(order) < 0 or max(order) >= raw.n_channels:
        raise LayoutError(f"electrode order {order} does not index {raw.n_channels} channels")

    samples = cfg.samples_per_epoch(raw.sample_rate)
    low = downsample(raw, cfg.downsample_factor)
    selected = low.channels[order]

    trials = []
    for i, event in enumerate(low.events):
        start = event.sample_index
        if start < 0 or start + samples > low.n_samples:
            raise DataError(
                f"event {i} (stimulus {event.stimulus_id}, symbol {event.symbol_index}, "
                f"cycle {event.cycle_index}) window [{start}, {start + samples}) "
                f"exceeds {low.n_samples} downsampled samples"
            )
        trials.append(
            Trial(
                features=selected[:, start:start + samples].reshape(-1),
                label=int(event.is_target),
                stimulus_id=event.stimulus_id,
                cycle_index=event.cycle_index,
                symbol_index=event.symbol_index,
            )
        )
    logger.debug(f"extracted {len(trials)} epochs of {len(order)} x {samples} samples")
    return trials


def epochs_to_session(
    trials: Sequence[Trial],
    geometry: Optional[SpellerGeometry] = None,
    cycles: Optional[int] = None,
    electrode_count: Optional[int] = None,
    rng_seed: int = 0,
) -> SessionData:
    """
    Assemble extracted epochs into a session.

    Each symbol's target is read off its labels: the one row stimulus and the
    one column stimulus labeled 1.
    """
    settings = Settings()
    geometry = geometry or SpellerGeometry.from_settings()
    cycles = settings.speller.cycles if cycles is None else cycles
    n_symbols = 1 + max((t.symbol_index for t in trials), default=-1)

    targets = [[set(), set()] for _ in range(n_symbols)]
    for trial in trials:
        if trial.label == 1:
            is_col = trial.stimulus_id >= geometry.n_rows
            targets[trial.symbol_index][is_col].add(trial.stimulus_id)

    symbols = []
    for index, (rows, cols) in enumerate(targets):
        if len(rows) != 1 or len(cols) != 1:
            raise DataError(
                f"symbol {index} needs exactly one target row and one target column, "
                f"got rows {sorted(rows)} and columns {sorted(cols)}"
            )
        symbols.append((rows.pop(), cols.pop() - geometry.n_rows))

    config = SessionConfig(geometry=geometry, cycles_per_symbol=cycles, symbols=symbols, rng_seed=rng_seed)
    return SessionData.from_trials(config, list(trials), electrode_count=electrode_count)
