# homscope/errors.py
from __future__ import annotations

from dataclasses import dataclass


class HomScopeError(Exception):
    """Base class for every error raised by the library"""


class DimensionError(HomScopeError):
    """Sample counts or grids do not match"""


class DegenerateStateError(HomScopeError):
    """A state or field has zero norm / zero intensity"""


class AccuracyError(HomScopeError):
    """Norm loss or an out-of-range raw value exceeds the declared tolerance"""


class ResolutionError(HomScopeError):
    """A grid is too coarse for the structure it has to represent"""


class ConfigError(HomScopeError):
    """Physically invalid pump, device, cavity or comb parameters"""


class NumericalWarning(UserWarning):
    """Advisory about coverage, truncation or resampling losses"""


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    field: str
    message: str
    line: int | None = None

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{self.level}: {where}{self.field}: {self.message}"


class ScenarioError(HomScopeError):
    """A scenario file does not match the documented schema"""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.level == "error"]
        summary = "; ".join(str(d) for d in errors) or "invalid scenario"
        super().__init__(summary)
