# homscope/gkpcomb.py
"""
Frequency-comb qubits.

Logical zero puts Gaussian teeth of width s at w0 + 2 n Delta, logical one
at w0 + Delta + 2 n Delta; both are weighted by a Gaussian envelope of width
kappa. X is a frequency shift by Delta and Z a time shift by pi / Delta.
Without an envelope the comb is periodic over the grid span.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, replace

import numpy as np

import config
from homscope import sfgrid
from homscope.biphoton import (
    PMConvention,
    SpectralAmplitude,
    jsa_from_pm,
    normalize,
    separable_jsa,
)
from homscope.errors import AccuracyError, ConfigError, DimensionError, ResolutionError
from homscope.hom import hom_scan
from homscope.sfgrid import FrequencyGrid

LOGGER = logging.getLogger(__name__)


class LogicalLabel(enum.Enum):
    ZERO = "0"
    ONE = "1"
    PLUS = "+"
    MINUS = "-"
    RAW = "raw"

    @classmethod
    def parse(cls, value) -> "LogicalLabel":
        if isinstance(value, cls):
            return value
        aliases = {"zero": "0", "one": "1", "plus": "+", "minus": "-"}
        text = str(value).lower()
        return cls(aliases.get(text, text))


class ShiftKind(enum.Enum):
    FREQUENCY = "frequency"
    TIME = "time"


@dataclass(frozen=True)
class ShiftGate:
    kind: ShiftKind
    amount: float


def logical_x(spacing: float) -> ShiftGate:
    return ShiftGate(ShiftKind.FREQUENCY, spacing)


def logical_z(spacing: float) -> ShiftGate:
    return ShiftGate(ShiftKind.TIME, np.pi / spacing)


@dataclass(frozen=True)
class CombState:
    amplitude: SpectralAmplitude
    spacing: float
    tooth_width: float
    envelope_width: float | None
    label: LogicalLabel = LogicalLabel.RAW
    center: float = 0.0

    def __post_init__(self):
        if self.spacing <= 0:
            raise ConfigError("comb spacing must be positive")
        if not 0.0 <= self.tooth_width < self.spacing / 4.0:
            raise ConfigError(
                f"tooth width {self.tooth_width:.4g} must stay below a quarter of the spacing {self.spacing:.4g}"
            )

    @property
    def periodic(self) -> bool:
        return self.envelope_width is None

    @property
    def grid(self) -> FrequencyGrid:
        return self.amplitude.grid


_X_LABELS = {
    LogicalLabel.ZERO: LogicalLabel.ONE,
    LogicalLabel.ONE: LogicalLabel.ZERO,
    LogicalLabel.PLUS: LogicalLabel.PLUS,
    LogicalLabel.MINUS: LogicalLabel.MINUS,
}
_Z_LABELS = {
    LogicalLabel.ZERO: LogicalLabel.ZERO,
    LogicalLabel.ONE: LogicalLabel.ONE,
    LogicalLabel.PLUS: LogicalLabel.MINUS,
    LogicalLabel.MINUS: LogicalLabel.PLUS,
}


def _check_periodic_span(grid: FrequencyGrid, spacing: float):
    periods = grid.span / (2.0 * spacing)
    if not np.isclose(periods, np.round(periods), rtol=0.0, atol=1e-9):
        raise ConfigError(
            f"a periodic comb needs the grid span {grid.span:.6g} to be a multiple of 2 x spacing"
        )


def _teeth(grid: FrequencyGrid, offset: float, spacing: float, tooth_width: float,
           envelope_width: float | None, center: float) -> np.ndarray:
    w = grid.points
    if envelope_width is None:
        first = center + offset + 2.0 * spacing * np.ceil((grid.first - center - offset) / (2.0 * spacing))
        centers = np.arange(first, grid.first + grid.span, 2.0 * spacing)
        distance = w[None, :] - centers[:, None]
        distance = (distance + grid.span / 2.0) % grid.span - grid.span / 2.0
        weights = np.ones(centers.size)
    else:
        reach = 6.0 * envelope_width + 5.0 * tooth_width
        low = np.ceil((max(grid.first, center - reach) - center - offset) / (2.0 * spacing))
        high = np.floor((min(grid.last, center + reach) - center - offset) / (2.0 * spacing))
        centers = center + offset + 2.0 * spacing * np.arange(low, high + 1)
        distance = w[None, :] - centers[:, None]
        weights = np.exp(-((centers - center) ** 2) / (2.0 * envelope_width ** 2))
    if centers.size == 0:
        return np.zeros(grid.n, dtype=complex)
    return (weights[:, None] * np.exp(-distance ** 2 / (2.0 * tooth_width ** 2))).sum(axis=0).astype(complex)


def encode(label, spacing: float, tooth_width: float, envelope_width: float | None,
           grid: FrequencyGrid, center: float | None = None) -> CombState:
    """Logical comb state on `grid`; envelope_width None gives a periodic comb"""
    label = LogicalLabel.parse(label)
    if label is LogicalLabel.RAW:
        raise ConfigError("encode needs a logical label")
    if center is None:
        center = grid.center
    if not 0.0 < tooth_width < spacing / 4.0:
        raise ConfigError(
            f"tooth width {tooth_width:.4g} must lie in (0, spacing / 4 = {spacing / 4.0:.4g})"
        )
    per_tooth = config.numeric("tooth_samples")
    if grid.step > 4.0 * tooth_width / per_tooth:
        raise ResolutionError(
            f"grid step {grid.step:.4g} leaves fewer than {per_tooth} samples across a tooth"
        )
    if envelope_width is None:
        _check_periodic_span(grid, spacing)
    elif envelope_width < 4.0 * spacing:
        raise ConfigError("the envelope must span at least 8 teeth (envelope_width >= 4 x spacing)")
    else:
        sfgrid.check_coverage(grid, center, envelope_width, "comb envelope")

    def build(offset):
        values = _teeth(grid, offset, spacing, tooth_width, envelope_width, center)
        return normalize(SpectralAmplitude(grid, values)).values

    if label is LogicalLabel.ZERO:
        values = build(0.0)
    elif label is LogicalLabel.ONE:
        values = build(spacing)
    else:
        sign = 1.0 if label is LogicalLabel.PLUS else -1.0
        values = build(0.0) + sign * build(spacing)
    amplitude = normalize(SpectralAmplitude(grid, values))
    return CombState(amplitude, spacing, tooth_width, envelope_width, label, center)


def ideal_comb(label, spacing: float, grid: FrequencyGrid, center: float | None = None) -> CombState:
    """Periodic comb with one sample per tooth"""
    label = LogicalLabel.parse(label)
    if label is LogicalLabel.RAW:
        raise ConfigError("ideal_comb needs a logical label")
    if center is None:
        center = grid.center
    ratio = spacing / grid.step
    if not np.isclose(ratio, np.round(ratio), rtol=0.0, atol=1e-9):
        raise ConfigError("an ideal comb needs the spacing to be a whole number of grid steps")
    _check_periodic_span(grid, spacing)
    index = np.round((grid.points - center) / grid.step).astype(int)
    period = int(np.round(2.0 * ratio))
    half = int(np.round(ratio))
    zero = (index % period == 0).astype(complex)
    one = (index % period == half).astype(complex)
    values = {
        LogicalLabel.ZERO: zero,
        LogicalLabel.ONE: one,
        LogicalLabel.PLUS: zero + one,
        LogicalLabel.MINUS: zero - one,
    }[label]
    return CombState(normalize(SpectralAmplitude(grid, values)), spacing, 0.0, None, label, center)


def apply_gate(state: CombState, gate: ShiftGate) -> CombState:
    """Apply a frequency or time shift; logical labels follow X and Z"""
    grid = state.grid
    if gate.kind is ShiftKind.FREQUENCY:
        values, lost = sfgrid.displace(state.amplitude.values, grid, gate.amount, periodic=state.periodic)
        if lost > config.numeric("max_norm_loss"):
            raise AccuracyError(f"frequency shift {gate.amount:.6g} pushed {lost:.3%} of the comb off the grid")
        logical = np.isclose(gate.amount, state.spacing)
        labels = _X_LABELS
    else:
        values = state.amplitude.values * np.exp(1j * grid.points * gate.amount)
        logical = np.isclose(gate.amount, np.pi / state.spacing)
        labels = _Z_LABELS
    label = labels.get(state.label, LogicalLabel.RAW) if logical else LogicalLabel.RAW
    LOGGER.debug("%s shift %.6g: %s -> %s", gate.kind.value, gate.amount, state.label.value, label.value)
    return replace(state, amplitude=SpectralAmplitude(grid, values), label=label)


def logical_overlap(a: CombState, b: CombState) -> complex:
    """<a|b>"""
    if not a.grid.matches(b.grid):
        raise DimensionError("comb states live on different grids")
    return sfgrid.inner_product(a.amplitude.values, b.amplitude.values, a.grid)


def hom_readout(a: CombState, b: CombState, taus) -> np.ndarray:
    """Coincidence trace of the separable pair a x b"""
    if not a.grid.matches(b.grid):
        raise DimensionError("comb states live on different grids")
    return hom_scan(separable_jsa(a.amplitude, b.amplitude), taus)


def pair_readout(state: CombState, taus, plus: SpectralAmplitude,
                 convention: PMConvention = PMConvention.HALVED) -> np.ndarray:
    """
    Coincidence trace of a photon pair whose difference-frequency amplitude
    is the comb. In the halved convention C(tau) = 1/2 - 1/2 W(0, tau), so the
    trace runs from 0 to 1 as tau moves from 0 to pi / (2 spacing) on a one comb.
    """
    return hom_scan(jsa_from_pm(plus, state.amplitude, convention), taus)
