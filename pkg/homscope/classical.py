# homscope/classical.py
"""
Intensity correlations behind a balanced beam splitter.

Two coherent pulses alpha and beta (beta carrying a random relative phase
phi) give, after averaging over phi,

    C(t) = (S^2 - |Z|^2 / 2 - Re[m2 Z^2] / 2) / (S^2 - Re[m1 Z]^2)

with S = (integral |alpha|^2 + |beta|^2) / 2, Z(t) = integral alpha conj(beta) exp(i w t)
and m_k = <exp(i k phi)>. A single biphoton reaches the same quantity
through its moments.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

import config
from homscope import sfgrid
from homscope.biphoton import JointSpectralAmplitude, SpectralAmplitude, exchange_overlap
from homscope.errors import AccuracyError, ConfigError, DegenerateStateError, DimensionError

LOGGER = logging.getLogger(__name__)


class PhaseKind(enum.Enum):
    UNIFORM = "uniform"
    TWO_POINT = "two_point"
    FIXED = "fixed"


@dataclass(frozen=True)
class PhaseMoments:
    m1: complex
    m2: complex


@dataclass(frozen=True)
class PhaseDistribution:
    kind: PhaseKind
    phases: tuple = ()

    def __post_init__(self):
        expected = {PhaseKind.UNIFORM: 0, PhaseKind.TWO_POINT: 2, PhaseKind.FIXED: 1}[self.kind]
        if len(self.phases) != expected:
            raise ConfigError(f"{self.kind.value} phase distribution takes {expected} phase(s)")

    @classmethod
    def uniform(cls):
        return cls(PhaseKind.UNIFORM)

    @classmethod
    def two_point(cls, a: float, b: float):
        return cls(PhaseKind.TWO_POINT, (float(a), float(b)))

    @classmethod
    def fixed(cls, phase: float):
        return cls(PhaseKind.FIXED, (float(phase),))

    @property
    def moments(self) -> PhaseMoments:
        if self.kind is PhaseKind.UNIFORM:
            return PhaseMoments(0j, 0j)
        phases = np.asarray(self.phases)
        # equal weights on every listed phase
        return PhaseMoments(complex(np.mean(np.exp(1j * phases))), complex(np.mean(np.exp(2j * phases))))

    @property
    def is_deterministic(self) -> bool:
        """A single phase value: the fields are coherent and C is identically one"""
        return self.kind is not PhaseKind.UNIFORM and abs(self.moments.m1) > 1.0 - 1e-12


@dataclass(frozen=True)
class CoherentInput:
    """Pulse pair; beta defaults to a copy of alpha"""

    alpha: SpectralAmplitude
    phase: PhaseDistribution
    beta: SpectralAmplitude | None = None

    def __post_init__(self):
        if self.beta is not None and not self.alpha.grid.matches(self.beta.grid):
            raise DimensionError("both pulses must share a grid")
        if self.mean_photon_number() <= 0.0:
            raise DegenerateStateError("coherent input carries no light")

    @property
    def second(self) -> SpectralAmplitude:
        return self.alpha if self.beta is None else self.beta

    def mean_photon_number(self) -> float:
        return self.alpha.norm() ** 2 + self.second.norm() ** 2


def _terms(source: CoherentInput, t: float):
    grid = source.alpha.grid
    s = 0.5 * source.mean_photon_number()
    z = sfgrid.integrate(source.alpha.values * np.conj(source.second.values) * np.exp(1j * grid.points * t), grid)
    return s, z


def intensity_correlation(source: CoherentInput, t: float) -> float:
    """Normalized coincidence C(t) of the detector intensities"""
    if source.phase.is_deterministic:
        # numerator and denominator coincide for a single phase
        return 1.0
    moments = source.phase.moments
    s, z = _terms(source, t)
    numerator = s ** 2 - 0.5 * abs(z) ** 2 - 0.5 * (moments.m2 * z ** 2).real
    denominator = s ** 2 - (moments.m1 * z).real ** 2
    if denominator <= 1e-12 * s ** 2:
        raise DegenerateStateError(
            f"all light leaves one port at t = {t:.6g}; the correlation is undefined"
        )
    ratio = numerator / denominator
    tolerance = config.numeric("clamp_tolerance")
    if ratio < -tolerance:
        raise AccuracyError(f"intensity correlation {ratio:.3e} is negative at t = {t:.6g}")
    return float(max(0.0, ratio))


def second_order_only_correlation(source: CoherentInput, t: float) -> float:
    """Correlation with the first-order interference term dropped; bounded by [1/2, 1]"""
    s, z = _terms(source, t)
    return float((s ** 2 - 0.5 * abs(z) ** 2) / s ** 2)


def correlation_scan(source: CoherentInput, times, second_order_only: bool = False) -> np.ndarray:
    evaluate = second_order_only_correlation if second_order_only else intensity_correlation
    return np.array([evaluate(source, float(t)) for t in np.atleast_1d(times)])


def visibility(curve) -> float:
    """
    (C_far - C_min) / C_far with C_far the mean of the outer 10% of the scan.
    """
    curve = np.asarray(curve, dtype=float)
    if curve.size < 3:
        raise ValueError("visibility needs at least three samples")
    edge = max(1, int(round(0.05 * curve.size)))
    far = float(np.mean(np.concatenate([curve[:edge], curve[-edge:]])))
    if far <= 0.0:
        raise DegenerateStateError("no coincidences far from the dip")
    return float((far - np.min(curve)) / far)


@dataclass(frozen=True)
class BiphotonMoments:
    """Detector moments of a single photon pair at delay t"""

    mean_total: float  # <N>
    mean_total_squared: float  # <N^2>
    mean_interference: complex  # <I>
    mean_interference_squared: complex  # <I^2>
    interference_quadrature: float  # <(I + I^dagger)^2>

    @property
    def correlation(self) -> float:
        numerator = self.mean_total_squared - self.interference_quadrature
        denominator = self.mean_total ** 2 - (2.0 * self.mean_interference.real) ** 2
        return float(numerator / denominator)


def biphoton_moments(jsa: JointSpectralAmplitude, t: float) -> BiphotonMoments:
    """
    I moves one photon from arm 2 to arm 1; with exactly one photon per arm
    <I> and <I^2> vanish and only the exchange overlap survives.
    """
    overlap = exchange_overlap(jsa, t)
    return BiphotonMoments(
        mean_total=2.0,
        mean_total_squared=4.0,
        mean_interference=0j,
        mean_interference_squared=0j,
        interference_quadrature=2.0 + 2.0 * overlap.real,
    )


def biphoton_intensity_correlation(jsa: JointSpectralAmplitude, t: float) -> float:
    """Same statistic as intensity_correlation for a photon pair; equals 1/2 - 1/2 Re overlap"""
    return biphoton_moments(jsa, t).correlation
