"""
Main configuration settings for the P300 accuracy toolkit
"""
import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()


class QuadratureSettings(BaseSettings):
    """Fixed Gauss-Legendre quadrature used for the accuracy function"""
    panel_count: int = int(os.getenv("QUADRATURE_PANEL_COUNT", "64"))
    half_width: float = float(os.getenv("QUADRATURE_HALF_WIDTH", "12.0"))


class SpellerSettings(BaseSettings):
    """Speller matrix geometry and averaging cycles per symbol"""
    rows: int = int(os.getenv("SPELLER_ROWS", "6"))
    cols: int = int(os.getenv("SPELLER_COLS", "6"))
    cycles: int = int(os.getenv("SPELLER_CYCLES", "15"))


class SimulationSettings(BaseSettings):
    """Defaults for simulated sessions"""
    seed: int = int(os.getenv("SIM_SEED", "0"))
    electrodes: int = int(os.getenv("SIM_ELECTRODES", "8"))
    samples_per_electrode: int = int(os.getenv("SIM_SAMPLES_PER_ELECTRODE", "39"))
    symbols: int = int(os.getenv("SIM_SYMBOLS", "50"))


class LdaSettings(BaseSettings):
    """Ridge applied to the pooled covariance before solving for w"""
    shrinkage_kind: str = os.getenv("LDA_SHRINKAGE_KIND", "relative")
    shrinkage_value: float = float(os.getenv("LDA_SHRINKAGE_VALUE", "1e-6"))


class ValidationSettings(BaseSettings):
    """Validation protocol and curve-fitting settings"""
    n_train: int = int(os.getenv("VALIDATION_N_TRAIN", "10"))
    n_reps: int = int(os.getenv("VALIDATION_N_REPS", "100"))
    gamma_max: float = float(os.getenv("FIT_GAMMA_MAX", "5.0"))
    grid_step: float = float(os.getenv("FIT_GRID_STEP", "0.01"))
    tolerance: float = float(os.getenv("FIT_TOLERANCE", "1e-8"))
    proxy_fixed_n: int = int(os.getenv("PROXY_FIXED_N", "3"))


class IngestSettings(BaseSettings):
    """Epoch extraction settings for recorded sessions"""
    window_ms: float = float(os.getenv("EPOCH_WINDOW_MS", "600"))
    downsample_factor: int = int(os.getenv("EPOCH_DOWNSAMPLE_FACTOR", "4"))


class Settings(BaseSettings):
    """Main settings class that combines all settings"""
    quadrature: QuadratureSettings = QuadratureSettings()
    speller: SpellerSettings = SpellerSettings()
    simulation: SimulationSettings = SimulationSettings()
    lda: LdaSettings = LdaSettings()
    validation: ValidationSettings = ValidationSettings()
    ingest: IngestSettings = IngestSettings()
    log_level: str = os.getenv("LOG_LEVEL", "INFO")
    show_progress: bool = os.getenv("SHOW_PROGRESS", "True").lower() == "true"

# Create a global settings instance
settings = Settings()
