from pydantic import BaseModel, ConfigDict, field_validator

from core.errors import DomainError
from settings_config import Settings


class QuadratureConfig(BaseModel):
    """Composite Gauss-Legendre rule: panel_count panels of 16 nodes each"""
    model_config = ConfigDict(frozen=True)

    panel_count: int = 64
    half_width: float = 12.0

    @field_validator("panel_count")
    @classmethod
    def _check_panels(cls, value: int) -> int:
        if value < 16:
            raise ValueError("panel_count must be at least 16")
        return value

    @field_validator("half_width")
    @classmethod
    def _check_half_width(cls, value: float) -> float:
        if not value >= 8:
            raise ValueError("half_width must be at least 8")
        return value

    @classmethod
    def from_settings(cls) -> "QuadratureConfig":
        settings = Settings()
        return cls(
            panel_count=settings.quadrature.panel_count,
            half_width=settings.quadrature.half_width,
        )


class SpellerGeometry(BaseModel):
    """Rows and columns of the speller matrix"""
    model_config = ConfigDict(frozen=True)

    n_rows: int = 6
    n_cols: int = 6

    @field_validator("n_rows", "n_cols")
    @classmethod
    def _check_axis(cls, value: int) -> int:
        # a single-row axis is always selected correctly; reject it as degenerate
        if value < 2:
            raise ValueError("each speller axis needs at least 2 alternatives")
        return value

    @property
    def n_stimuli(self) -> int:
        return self.n_rows + self.n_cols

    @property
    def chance(self) -> float:
        return 1.0 / (self.n_rows * self.n_cols)

    def target_stimuli(self, row: int, col: int) -> tuple:
        """Stimulus ids flashing the given cell: rows first, then columns"""
        if not (0 <= row < self.n_rows and 0 <= col < self.n_cols):
            raise DomainError(f"target ({row}, {col}) outside a {self.n_rows}x{self.n_cols} matrix")
        return row, self.n_rows + col

    @classmethod
    def from_settings(cls) -> "SpellerGeometry":
        settings = Settings()
        return cls(n_rows=settings.speller.rows, n_cols=settings.speller.cols)


class ScoreMoments(BaseModel):
    """Distribution of the averaged classifier score after n cycles"""
    model_config = ConfigDict(frozen=True)

    m0: float
    m1: float
    sigma_n: float

    @property
    def separation(self) -> float:
        return (self.m1 - self.m0) / self.sigma_n
