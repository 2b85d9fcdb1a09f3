"""
Config files for CLI commands.

A simulate config is one JSON document validated by SimulationConfig; every
field is optional and command-line flags override the file.
"""
import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from core.accuracy.models import SpellerGeometry
from core.errors import ConfigError
from core.simulation.gaussian_model import CovarianceStructure, GaussianP300Model, make_synthetic_model
from core.simulation.session import SessionConfig, random_symbols
from core.validation.electrodes import electrode_columns
from settings_config import settings


class SimulationConfig(BaseModel):
    """Everything needed to simulate one session with a synthetic Gaussian model"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_rows: int = settings.speller.rows
    n_cols: int = settings.speller.cols
    cycles_per_symbol: int = settings.speller.cycles
    n_symbols: int = settings.simulation.symbols
    electrode_count: int = settings.simulation.electrodes
    samples_per_electrode: int = settings.simulation.samples_per_electrode
    gamma: float = 1.0
    covariance: CovarianceStructure = CovarianceStructure.IDENTITY
    rho: float = 0.0
    signal_electrodes: Optional[List[int]] = None
    symbols: Optional[List[Tuple[int, int]]] = None
    seed: int = settings.simulation.seed
    model_seed: Optional[int] = None

    @field_validator("n_symbols", "electrode_count", "samples_per_electrode")
    @classmethod
    def _check_positive(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must not be negative")
        return value

    @property
    def dim(self) -> int:
        return self.electrode_count * self.samples_per_electrode

    @property
    def geometry(self) -> SpellerGeometry:
        return SpellerGeometry(n_rows=self.n_rows, n_cols=self.n_cols)

    def build_model(self) -> GaussianP300Model:
        support = None
        if self.signal_electrodes is not None:
            if any(not 0 <= e < self.electrode_count for e in self.signal_electrodes):
                raise ConfigError(f"signal electrodes {self.signal_electrodes} outside 0..{self.electrode_count - 1}")
            support = electrode_columns(self.signal_electrodes, self.samples_per_electrode)
        return make_synthetic_model(
            self.dim,
            self.gamma,
            structure=self.covariance,
            rho=self.rho,
            rng=self.seed if self.model_seed is None else self.model_seed,
            support=support,
        )

    def session_config(self) -> SessionConfig:
        symbols = self.symbols
        if symbols is None:
            # the stream after the per-symbol simulation streams
            child = np.random.SeedSequence(self.seed).spawn(self.n_symbols + 1)[-1]
            symbols = random_symbols(self.geometry, self.n_symbols, np.random.Generator(np.random.PCG64(child)))
        return SessionConfig(
            geometry=self.geometry,
            cycles_per_symbol=self.cycles_per_symbol,
            symbols=symbols,
            rng_seed=self.seed,
        )


def load_simulation_config(path: Optional[Union[str, Path]], **overrides) -> SimulationConfig:
    """
    Read a config file (or start from defaults) and apply non-None overrides.

    Raises:
        ConfigError: unreadable JSON or invalid field values
    """
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"malformed config {path}: {e.msg} (line {e.lineno}, column {e.colno})") from e
        except UnicodeDecodeError as e:
            raise ConfigError(f"config {path} is not UTF-8: {e.reason} (byte {e.start})") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a JSON object")
    data.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return SimulationConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"invalid simulation config field '{field}': {first['msg']}") from e
