"""
Recorded data into sessions: epoching, downsampling and the session file format.
"""
from core.ingest.recording import (
    EpochConfig,
    Event,
    RawRecording,
    downsample,
    epochs_to_session,
    extract_epochs,
)
from core.ingest.session_io import ERP_COLUMNS, export_average_erps, read_session, write_session

__all__ = [
    "ERP_COLUMNS",
    "EpochConfig",
    "Event",
    "RawRecording",
    "downsample",
    "epochs_to_session",
    "export_average_erps",
    "extract_epochs",
    "read_session",
    "write_session",
]
