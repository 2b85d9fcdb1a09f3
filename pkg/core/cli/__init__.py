"""
Command-line interface: python -m core.cli <command>.
"""
from core.cli.app import app
from core.cli.config import SimulationConfig, load_simulation_config
from core.cli.manifest import RunManifest, manifest_path, write_manifest

__all__ = ["RunManifest", "SimulationConfig", "app", "load_simulation_config", "manifest_path", "write_manifest"]
