"""
Exception hierarchy shared by every toolkit component.

The CLI maps the three families (config, data, numerical) to distinct exit codes.
"""
from typing import Optional


class P300ToolkitError(Exception):
    """Base class for all toolkit errors"""


class ConfigError(P300ToolkitError, ValueError):
    """Invalid parameters or configuration"""


class DomainError(ConfigError):
    """An argument lies outside the mathematical domain of an operation"""


class ModelConstructionError(ConfigError):
    """A Gaussian model could not be built from the given parameters"""

    def __init__(self, message: str, leading_minor: Optional[int] = None):
        super().__init__(message)
        self.leading_minor = leading_minor


class DataError(P300ToolkitError, ValueError):
    """Input data is inconsistent or unusable"""


class DimensionError(DataError):
    """Vectors or matrices of mismatched dimension"""


class InsufficientDataError(DataError):
    """Not enough trials or symbols for the requested operation"""


class LayoutError(DataError):
    """Feature vectors do not follow the electrode-major layout"""


class SessionFormatError(DataError):
    """A session or artifact file could not be parsed"""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        field: Optional[str] = None,
        offset: Optional[int] = None,
    ):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if offset is not None:
            location.append(f"byte {offset}")
        if field:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.line = line
        self.column = column
        self.field = field
        self.offset = offset

    @classmethod
    def from_decode_error(cls, message: str, data: bytes, error: UnicodeDecodeError) -> "SessionFormatError":
        """Locate the first byte that is not UTF-8 by line, column and offset"""
        before = data[: error.start]
        line = before.count(b"\n") + 1
        column = error.start - (before.rfind(b"\n") + 1) + 1
        return cls(f"{message}: {error.reason}", line=line, column=column, offset=error.start)


class NumericalError(P300ToolkitError, ArithmeticError):
    """A numerical procedure failed"""


class FactorizationError(NumericalError):
    """Cholesky factorization failed, even after the recorded shrinkage"""

    def __init__(self, message: str, lam: float = 0.0):
        super().__init__(f"{message} (shrinkage lambda={lam:.6g})")
        self.lam = lam
