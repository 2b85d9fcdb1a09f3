"""
JSON session files and averaged-ERP export.

A session file is one JSON document:

    {"format": "p300-session", "version": 1,
     "header": {"geometry": {"n_rows": 6, "n_cols": 6}, "cycles_per_symbol": 15,
                "dim": 312, "electrode_count": 8, "samples_per_electrode": 39,
                "symbols": [[row, col], ...], "rng_seed": 0},
     "trials": [{"symbol_index": 0, "cycle_index": 0, "stimulus_id": 3,
                 "label": 0, "features": [...]}, ...]}

Floats are written in their shortest round-trip form, so reading a written
file reproduces every feature bit for bit. docs/core/ingest.md documents each
field.
"""
import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError

from core.accuracy.models import SpellerGeometry
from core.errors import DataError, LayoutError, SessionFormatError
from core.simulation.session import SessionConfig, SessionData

ERP_COLUMNS = ["electrode", "sample", "mu0_hat", "mu1_hat", "difference"]


class SessionHeader(BaseModel):
    geometry: SpellerGeometry
    cycles_per_symbol: int
    dim: int
    electrode_count: Optional[int] = None
    samples_per_electrode: Optional[int] = None
    symbols: List[Tuple[int, int]]
    rng_seed: int = 0


class TrialRecord(BaseModel):
    symbol_index: int
    cycle_index: int
    stimulus_id: int
    label: int
    features: List[float]


class SessionFile(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    format: Literal["p300-session"] = "p300-session"
    version: int = 1
    header: SessionHeader
    trials: List[TrialRecord]


def write_session(session: SessionData, path: Union[str, Path]) -> Path:
    cfg = session.config
    samples = session.dim // session.electrode_count if session.electrode_count else None
    document = SessionFile(
        header=SessionHeader(
            geometry=cfg.geometry,
            cycles_per_symbol=cfg.cycles_per_symbol,
            dim=session.dim,
            electrode_count=session.electrode_count,
            samples_per_electrode=samples,
            symbols=list(cfg.symbols),
            rng_seed=cfg.rng_seed,
        ),
        trials=[
            TrialRecord(
                symbol_index=trial.symbol_index,
                cycle_index=trial.cycle_index,
                stimulus_id=trial.stimulus_id,
                label=trial.label,
                features=trial.features.tolist(),
            )
            for trial in session.trials
        ],
    )
    path = Path(path)
    path.write_text(document.model_dump_json(indent=1))
    logger.debug(f"wrote {session.n_trials} trials to {path}")
    return path


def read_session(path: Union[str, Path]) -> SessionData:
    """
    Parse a session file.

    Raises:
        SessionFormatError: malformed JSON (with line and column) or a missing
            or mistyped field (with its location)
        DataError: a well-formed file describing an inconsistent session
    """
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise SessionFormatError.from_decode_error("session file is not UTF-8", data, e) from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SessionFormatError(f"malformed session file: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        document = SessionFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise SessionFormatError(f"invalid session file: {first['msg']}", field=field) from e

    header = document.header
    for i, trial in enumerate(document.trials):
        if len(trial.features) != header.dim:
            raise SessionFormatError(
                f"trial {i} has {len(trial.features)} features, header declares {header.dim}",
                field=f"trials.{i}.features",
            )
    if header.electrode_count and header.samples_per_electrode is not None:
        if header.electrode_count * header.samples_per_electrode != header.dim:
            raise SessionFormatError(
                "electrode_count x samples_per_electrode differs from dim", field="header.samples_per_electrode"
            )

    try:
        config = SessionConfig(
            geometry=header.geometry,
            cycles_per_symbol=header.cycles_per_symbol,
            symbols=header.symbols,
            rng_seed=header.rng_seed,
        )
    except ValidationError as e:
        raise SessionFormatError(f"invalid session header: {e.errors()[0]['msg']}", field="header") from e

    trials = document.trials
    features = (
        np.array([t.features for t in trials], dtype=float) if trials else np.zeros((0, header.dim))
    )
    return SessionData.from_arrays(
        config,
        features,
        [t.label for t in trials],
        [t.stimulus_id for t in trials],
        [t.cycle_index for t in trials],
        [t.symbol_index for t in trials],
        electrode_count=header.electrode_count,
    )


def export_average_erps(
    session: SessionData,
    path: Union[str, Path],
    electrode_count: Optional[int] = None,
) -> pd.DataFrame:
    """Write class-mean waveforms per electrode as CSV and return the table"""
    electrode_count = electrode_count or session.electrode_count or 1
    if session.dim % electrode_count:
        raise LayoutError(f"dimension {session.dim} is not split into {electrode_count} electrodes")
    is_target = session.labels == 1
    if not is_target.any() or is_target.all():
        raise DataError("averaging needs both target and non-target trials")

    mu0 = session.features[~is_target].mean(axis=0)
    mu1 = session.features[is_target].mean(axis=0)
    samples = session.dim // electrode_count
    table = pd.DataFrame(
        {
            "electrode": np.repeat(np.arange(electrode_count), samples),
            "sample": np.tile(np.arange(samples), electrode_count),
            "mu0_hat": mu0,
            "mu1_hat": mu1,
            "difference": mu1 - mu0,
        },
        columns=ERP_COLUMNS,
    )
    table.to_csv(path, index=False, float_format="%.17g")
    return table
