# homscope/pumpeng.py
"""
Pump engineering: from a transverse pump profile to the difference-frequency
amplitude f-(w-) of the generated photon pairs.

A pump beam hitting the waveguide at angle theta, centered at z0 with waist
w, contributes

    Phi(z) = A exp(-(z - z0)^2 cos^2(theta) / w^2) exp(i k_p sin(theta) z)

and the phase-matching integral over the device length is

    f-(w-) = integral_{-L/2}^{L/2} Phi(z) exp(-i (k_deg + w- / v) z) dz
"""
from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import constants

import config
from homscope import sfgrid
from homscope.biphoton import SpectralAmplitude, normalize
from homscope.errors import (
    ConfigError,
    DegenerateStateError,
    DimensionError,
    NumericalWarning,
    ResolutionError,
)
from homscope.sfgrid import FrequencyGrid

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeviceConfig:
    """Waveguide length, group velocity and degeneracy wavevector"""

    length: float
    group_velocity: float
    k_deg: float
    omega_p: float
    theta_deg: float
    c: float = constants.c

    def __post_init__(self):
        for name in ("length", "group_velocity", "omega_p", "c"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"device {name} must be positive, got {value}")
        if not abs(self.theta_deg) < np.pi / 2:
            raise ConfigError("degeneracy angle must lie inside (-pi/2, pi/2)")

    @property
    def pump_wavenumber(self) -> float:
        return self.omega_p / self.c

    @classmethod
    def from_degeneracy(cls, length, group_velocity, omega_p, theta_deg, c=constants.c):
        """k_deg chosen so that a beam at theta_deg phase-matches w- = 0"""
        return cls(length, group_velocity, omega_p / c * np.sin(theta_deg), omega_p, theta_deg, c)


@dataclass(frozen=True)
class PumpBeam:
    waist: float
    theta: float
    z0: float = 0.0
    amplitude: complex = 1.0

    def __post_init__(self):
        if not np.isfinite(self.waist) or self.waist <= 0:
            raise ConfigError(f"pump waist must be positive, got {self.waist}")
        if not abs(self.theta) < np.pi / 2:
            raise ConfigError("pump angle must lie inside (-pi/2, pi/2)")


class Detuning(enum.Enum):
    RESONANT = "resonant"
    ANTI_RESONANT = "anti_resonant"

    @property
    def phase(self) -> float:
        return 0.0 if self is Detuning.RESONANT else np.pi


@dataclass(frozen=True)
class CavityConfig:
    reflectivity: float
    roundtrip_time: float
    detuning: Detuning = Detuning.RESONANT

    def __post_init__(self):
        if not 0.0 <= self.reflectivity < 1.0:
            raise ConfigError(f"mirror reflectivity must lie in [0, 1), got {self.reflectivity}")
        if not np.isfinite(self.roundtrip_time) or self.roundtrip_time <= 0:
            raise ConfigError("cavity round-trip time must be positive")

    @property
    def free_spectral_range(self) -> float:
        return 4.0 * np.pi / self.roundtrip_time


def pump_profile(beams: Sequence[PumpBeam], z, device: DeviceConfig) -> np.ndarray:
    """Complex spatial profile Phi(z) of a sum of tilted Gaussian beams"""
    if not beams:
        raise ConfigError("a pump profile needs at least one beam")
    z = np.asarray(z, dtype=float)
    k = device.pump_wavenumber
    profile = np.zeros(z.shape, dtype=complex)
    for beam in beams:
        envelope = np.exp(-((z - beam.z0) * np.cos(beam.theta)) ** 2 / beam.waist ** 2)
        profile += beam.amplitude * envelope * np.exp(1j * k * np.sin(beam.theta) * z)
    return profile


def z_grid(device: DeviceConfig, beams: Sequence[PumpBeam], min_samples: int = 256) -> np.ndarray:
    """Midpoint lattice over the device fine enough for every beam's transverse phase"""
    per_wavelength = config.numeric("z_samples_per_wavelength")
    k = device.pump_wavenumber
    step = device.length / min_samples
    for beam in beams:
        step = min(step, beam.waist / np.cos(beam.theta) / per_wavelength)
        sine = abs(np.sin(beam.theta))
        if sine > 0:
            step = min(step, 2.0 * np.pi / (k * sine) / per_wavelength)
    n = int(np.ceil(device.length / step))
    step = device.length / n
    return -device.length / 2.0 + (np.arange(n) + 0.5) * step


def _check_z_sampling(z: np.ndarray, beams: Sequence[PumpBeam], device: DeviceConfig) -> float:
    if z.ndim != 1 or z.size < 2:
        raise DimensionError("the z lattice needs at least two points")
    step = float(z[1] - z[0])
    if step <= 0 or not np.allclose(np.diff(z), step, rtol=1e-9, atol=0.0):
        raise DimensionError("the z lattice must be uniform and increasing")
    per_wavelength = config.numeric("z_samples_per_wavelength")
    k = device.pump_wavenumber
    for beam in beams:
        sine = abs(np.sin(beam.theta))
        if sine == 0:
            continue
        wavelength = 2.0 * np.pi / (k * sine)
        if step > wavelength / per_wavelength:
            raise ResolutionError(
                f"z step {step:.4g} under-samples the transverse period {wavelength:.4g}"
                f" (need {per_wavelength} samples per period)"
            )
    return step


def phase_matching_amplitude(profile, z, device: DeviceConfig, grid: FrequencyGrid,
                             method: str = "fft", beams: Sequence[PumpBeam] = (),
                             unit_norm: bool = True) -> SpectralAmplitude:
    """
    f-(w-) on `grid` from a sampled profile Phi(z).

    `beams` is only used to check that z resolves their transverse phase.
    method "fft" uses the chirp-z transform, "quadrature" the direct sum.
    """
    profile = np.asarray(profile, dtype=complex)
    z = np.asarray(z, dtype=float)
    if profile.shape != z.shape:
        raise DimensionError(f"profile of shape {profile.shape} on a z lattice of shape {z.shape}")
    step = _check_z_sampling(z, beams, device)

    inside = np.abs(z) <= device.length / 2.0 + 1e-12 * device.length
    total = float(np.sum(np.abs(profile) ** 2))
    outside = float(np.sum(np.abs(profile[~inside]) ** 2))
    if total > 0 and outside > 1e-12 * total:
        message = f"pump profile truncated by the device: {outside / total:.3%} of its norm lies outside"
        LOGGER.warning(message)
        warnings.warn(message, NumericalWarning, stacklevel=2)

    integrand = np.where(inside, profile, 0.0) * np.exp(-1j * device.k_deg * z)
    v = device.group_velocity
    if method == "quadrature":
        kernel = np.exp(-1j * np.outer(grid.points / v, z))
        values = kernel @ integrand * step
    elif method == "fft":
        values = sfgrid.chirp_transform(
            integrand, z[0], step, grid.first / v, grid.step / v, grid.n, sign=-1
        ) * step
    else:
        raise ConfigError(f"unknown phase-matching method '{method}'")

    amplitude = SpectralAmplitude(grid, values)
    return normalize(amplitude) if unit_norm else amplitude


def gaussian_parameters(beam: PumpBeam, device: DeviceConfig):
    """(tau0, omega0, delta_omega) of the closed-form Gaussian f-"""
    v = device.group_velocity
    tau0 = beam.z0 / v
    omega0 = (device.pump_wavenumber * np.sin(beam.theta) - device.k_deg) * v
    delta_omega = 2.0 * v * np.cos(beam.theta) / beam.waist
    return tau0, omega0, delta_omega


def _gaussian_term(beam: PumpBeam, device: DeviceConfig, grid: FrequencyGrid) -> np.ndarray:
    # exact phase-matching integral of one beam on an unbounded device
    tau0, omega0, delta_omega = gaussian_parameters(beam, device)
    w = grid.points
    carrier = np.exp(1j * (device.pump_wavenumber * np.sin(beam.theta) - device.k_deg) * beam.z0)
    weight = beam.amplitude * np.sqrt(np.pi) * beam.waist / np.cos(beam.theta)
    return weight * carrier * np.exp(-1j * w * tau0) * np.exp(-((w - omega0) / delta_omega) ** 2)


def gaussian_fminus(beam: PumpBeam, device: DeviceConfig, grid: FrequencyGrid) -> SpectralAmplitude:
    """
    Closed form of f- for one beam when the device is much longer than the
    beam footprint: a Gaussian at omega0 = (k_p sin(theta) - k_deg) v with
    1/e half width 2 v cos(theta) / w and linear phase -w- z0 / v.
    """
    tau0, omega0, delta_omega = gaussian_parameters(beam, device)
    sfgrid.check_coverage(grid, omega0, delta_omega, "gaussian f-")
    footprint = abs(beam.z0) + 3.0 * beam.waist / np.cos(beam.theta)
    if footprint > device.length / 2.0:
        LOGGER.info("beam footprint %.4g reaches the device edge; closed form is approximate", footprint)
    return normalize(SpectralAmplitude(grid, _gaussian_term(beam, device, grid)))


def orthogonality_defect(beams: Sequence[PumpBeam], device: DeviceConfig, grid: FrequencyGrid) -> float:
    """Largest |<a|b>| between the normalized single-beam components"""
    components = [gaussian_fminus(beam, device, grid) for beam in beams]
    defect = 0.0
    for i in range(len(components)):
        for j in range(i + 1, len(components)):
            overlap = sfgrid.inner_product(components[i].values, components[j].values, grid)
            defect = max(defect, abs(overlap))
    return defect


def superpose_fminus(beams: Sequence[PumpBeam], device: DeviceConfig, grid: FrequencyGrid):
    """Normalized closed-form f- of several beams; returns (amplitude, defect)"""
    if not beams:
        raise ConfigError("superposition needs at least one beam")
    values = sum(_gaussian_term(beam, device, grid) for beam in beams)
    defect = orthogonality_defect(beams, device, grid)
    LOGGER.info("%d-component f-, orthogonality defect %.3e", len(beams), defect)
    return normalize(SpectralAmplitude(grid, values)), defect


def cat_fminus(beams: Sequence[PumpBeam], device: DeviceConfig, grid: FrequencyGrid) -> SpectralAmplitude:
    """Two-component (time or frequency) cat state"""
    if len(beams) != 2:
        raise ConfigError(f"a cat state takes exactly two beams, got {len(beams)}")
    return superpose_fminus(beams, device, grid)[0]


def compass_fminus(beams: Sequence[PumpBeam], device: DeviceConfig, grid: FrequencyGrid) -> SpectralAmplitude:
    """Four-component compass state"""
    if len(beams) != 4:
        raise ConfigError(f"a compass state takes exactly four beams, got {len(beams)}")
    return superpose_fminus(beams, device, grid)[0]


def time_cat_beams(device: DeviceConfig, waist: float, separation: float, phase: float = 0.0):
    """Two beams at the degeneracy angle, separated by `separation` along z"""
    return [
        PumpBeam(waist, device.theta_deg, -separation / 2.0, 1.0),
        PumpBeam(waist, device.theta_deg, separation / 2.0, np.exp(1j * phase)),
    ]


def frequency_cat_beams(device: DeviceConfig, waist: float, tilt: float, phase: float = 0.0):
    """Two beams at one spot, tilted symmetrically about the degeneracy angle"""
    return [
        PumpBeam(waist, device.theta_deg - tilt, 0.0, 1.0),
        PumpBeam(waist, device.theta_deg + tilt, 0.0, np.exp(1j * phase)),
    ]


def compass_beams(device: DeviceConfig, waist: float, tilt: float, separation: float):
    """Two tilted pairs at two spots"""
    return [
        PumpBeam(waist, device.theta_deg + sign_theta * tilt, sign_z * separation / 2.0, 1.0)
        for sign_z in (-1.0, 1.0)
        for sign_theta in (-1.0, 1.0)
    ]


def fplus_from_pump_spectrum(spectrum: SpectralAmplitude) -> SpectralAmplitude:
    """f+ is the pump spectrum itself"""
    return normalize(spectrum)


def cavity_transmission(omega, cavity: CavityConfig) -> np.ndarray:
    """Fabry-Perot transmission (1 - R) / (1 - R exp(i (w tau/2 + phi)))"""
    R = cavity.reflectivity
    phase = np.asarray(omega) * cavity.roundtrip_time / 2.0 + cavity.detuning.phase
    return (1.0 - R) / (1.0 - R * np.exp(1j * phase))


def cavity_comb(f: SpectralAmplitude, cavity: CavityConfig) -> SpectralAmplitude:
    """Filter an amplitude through the cavity; the result is renormalized"""
    per_period = config.numeric("comb_samples_per_period")
    if f.grid.step > cavity.free_spectral_range / per_period:
        raise ResolutionError(
            f"grid step {f.grid.step:.4g} under-samples the cavity free spectral range "
            f"{cavity.free_spectral_range:.4g} (need {per_period} samples per period)"
        )
    return normalize(SpectralAmplitude(f.grid, f.values * cavity_transmission(f.grid.points, cavity)))


def echo_ratio(f: SpectralAmplitude, cavity: CavityConfig) -> float:
    """Height of the first time-domain echo at +/- tau/2 relative to the main pulse"""
    values, time_grid = sfgrid.fourier_to_time(f.values, f.grid)
    t = time_grid.points
    magnitude = np.abs(values)
    main = np.interp(0.0, t, magnitude)
    if main == 0.0:
        raise DegenerateStateError("no main pulse at t = 0")
    half = cavity.roundtrip_time / 2.0
    echoes = [np.interp(s * half, t, magnitude) for s in (-1.0, 1.0)]
    return float(max(echoes) / main)
