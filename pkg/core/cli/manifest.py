from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from core import __version__


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunManifest(BaseModel):
    """Command, full parameter set, seed, toolkit version and time of one CLI run"""
    model_config = ConfigDict(frozen=True)

    command: str
    params: Dict[str, Any]
    rng_seed: Optional[int] = None
    version: str = __version__
    timestamp: str = Field(default_factory=_now)


def manifest_path(output: Union[str, Path]) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(output: Union[str, Path], manifest: RunManifest) -> Path:
    """Write the manifest sidecar next to `output`"""
    path = manifest_path(output)
    path.write_text(manifest.model_dump_json(indent=2))
    return path
