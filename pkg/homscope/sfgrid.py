# homscope/sfgrid.py
"""
Uniform frequency and time lattices.

Every continuum integral of the library is a Riemann sum on one of these
grids. Sample k of a grid with n points sits at

    center + (k - n/2) * step,        step = span / n

and a time grid is the Fourier dual of a frequency grid when
step_t * step_omega * n = 2*pi. The continuous Fourier transform is fixed to

    g~(t) = (2*pi)**-1/2 * integral g(omega) exp(-i omega t) d omega
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.signal import czt

import config
from homscope.errors import ConfigError, DimensionError, NumericalWarning

LOGGER = logging.getLogger(__name__)

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class _UniformGrid:
    n: int
    center: float
    span: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8:
            raise ConfigError(f"grid needs an integer n >= 8, got {self.n}")
        if not np.isfinite(self.span) or self.span <= 0:
            raise ConfigError(f"grid span must be positive, got {self.span}")
        if not np.isfinite(self.center):
            raise ConfigError("grid center must be finite")

    @property
    def step(self) -> float:
        return self.span / self.n

    @property
    def offsets(self) -> np.ndarray:
        return (np.arange(self.n) - self.n / 2) * self.step

    @property
    def points(self) -> np.ndarray:
        return self.center + self.offsets

    @property
    def first(self) -> float:
        return self.center - (self.n / 2) * self.step

    @property
    def last(self) -> float:
        return self.center + (self.n / 2 - 1) * self.step

    def matches(self, other: "_UniformGrid", rtol: float = 1e-12) -> bool:
        """True when both grids sample the same points"""
        return (
            self.n == other.n
            and np.isclose(self.step, other.step, rtol=rtol, atol=0.0)
            and np.isclose(self.center, other.center, rtol=0.0, atol=rtol * max(self.span, 1.0))
        )


@dataclass(frozen=True)
class FrequencyGrid(_UniformGrid):
    """Angular-frequency lattice [rad/s]"""

    @property
    def omega_center(self) -> float:
        return self.center

    @classmethod
    def dual_of(cls, time_grid: "TimeGrid", omega_center: float = 0.0) -> "FrequencyGrid":
        return cls(time_grid.n, omega_center, 2.0 * np.pi / time_grid.step)


@dataclass(frozen=True)
class TimeGrid(_UniformGrid):
    """Time / delay lattice [s]"""

    @property
    def t_center(self) -> float:
        return self.center

    @classmethod
    def dual_of(cls, freq_grid: FrequencyGrid, t_center: float = 0.0) -> "TimeGrid":
        return cls(freq_grid.n, t_center, 2.0 * np.pi / freq_grid.step)


def _check_length(samples: np.ndarray, grid: _UniformGrid, axis: int = -1):
    if samples.shape[axis] != grid.n:
        raise DimensionError(
            f"{samples.shape[axis]} samples on a grid of {grid.n} points"
        )


def integrate(samples, grid: _UniformGrid) -> complex:
    """Riemann sum step * sum(samples)"""
    samples = np.asarray(samples)
    if samples.ndim != 1:
        raise DimensionError("integrate expects a one-dimensional sample vector")
    _check_length(samples, grid)
    return complex(grid.step * np.sum(samples))


def inner_product(a, b, grid: _UniformGrid) -> complex:
    """<a|b> = integral conj(a) b on the grid"""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    _check_length(a, grid)
    return complex(grid.step * np.vdot(a, b))


def norm(samples, grid: _UniformGrid) -> float:
    samples = np.asarray(samples)
    _check_length(samples, grid)
    return float(np.sqrt(grid.step * np.sum(np.abs(samples) ** 2)))


def check_coverage(grid: _UniformGrid, center: float, sigma: float, what: str = "state") -> bool:
    """
    Warn (never fail) when the grid covers less than the configured number
    of standard deviations around `center`.
    """
    half = 0.5 * config.numeric("coverage_sigmas") * abs(sigma)
    covered = grid.first <= center - half and center + half <= grid.last
    if not covered:
        message = (
            f"{what}: grid [{grid.first:.6g}, {grid.last:.6g}] covers less than "
            f"{config.numeric('coverage_sigmas'):g} sigma around {center:.6g}"
        )
        LOGGER.warning(message)
        warnings.warn(message, NumericalWarning, stacklevel=2)
    return covered


def chirp_transform(values, x_first, x_step, y_first, y_step, m, sign=-1, axis=-1):
    """
    Evaluate sum_k values_k exp(sign * i * x_k * y_j) for uniform x_k and
    m uniform output points y_j, with the chirp-z transform.

    x_k = x_first + k * x_step and y_j = y_first + j * y_step.
    """
    values = np.asarray(values, dtype=complex)
    w = np.exp(sign * 1j * x_step * y_step)
    a = np.exp(-sign * 1j * x_step * y_first)
    transformed = czt(values, m=m, w=w, a=a, axis=axis)

    y = y_first + np.arange(m) * y_step
    phase = np.exp(sign * 1j * x_first * y)
    shape = [1] * transformed.ndim
    shape[axis] = m
    return transformed * phase.reshape(shape)


def fourier_to_time(g, grid: FrequencyGrid, t_center: float = 0.0, method: str = "fft"):
    """
    Continuous Fourier transform of g(omega) onto the dual time grid.

    Returns (values, TimeGrid). method is "fft" or "quadrature"; both
    evaluate the same Riemann sum, the quadrature path in O(n^2).
    """
    g = np.asarray(g, dtype=complex)
    if g.ndim != 1:
        raise DimensionError("fourier_to_time expects a one-dimensional amplitude")
    _check_length(g, grid)
    time_grid = TimeGrid.dual_of(grid, t_center)

    if method == "quadrature":
        kernel = np.exp(-1j * np.outer(time_grid.points, grid.points))
        return kernel @ g * (grid.step / SQRT_2PI), time_grid
    if method != "fft":
        raise ConfigError(f"unknown transform method '{method}'")

    n = grid.n
    k = np.arange(n)
    alternating = np.where(k % 2 == 0, 1.0, -1.0)
    h = g * alternating * np.exp(-1j * grid.offsets * t_center)
    spectrum = scipy.fft.fft(h)
    prefactor = (grid.step / SQRT_2PI) * np.exp(-1j * np.pi * n / 2)
    values = prefactor * np.exp(-1j * grid.center * time_grid.points) * alternating * spectrum
    return values, time_grid


def time_to_frequency(gt, time_grid: TimeGrid, omega_center: float = 0.0, method: str = "fft"):
    """Inverse of fourier_to_time; returns (values, FrequencyGrid)"""
    gt = np.asarray(gt, dtype=complex)
    if gt.ndim != 1:
        raise DimensionError("time_to_frequency expects a one-dimensional amplitude")
    _check_length(gt, time_grid)
    grid = FrequencyGrid.dual_of(time_grid, omega_center)

    if method == "quadrature":
        kernel = np.exp(1j * np.outer(grid.points, time_grid.points))
        return kernel @ gt * (time_grid.step / SQRT_2PI), grid
    if method != "fft":
        raise ConfigError(f"unknown transform method '{method}'")

    n = time_grid.n
    j = np.arange(n)
    alternating = np.where(j % 2 == 0, 1.0, -1.0)
    y = gt * alternating * np.exp(1j * grid.center * time_grid.offsets)
    summed = n * scipy.fft.ifft(y)
    prefactor = (time_grid.step / SQRT_2PI) * np.exp(1j * np.pi * n / 2)
    values = prefactor * np.exp(1j * grid.points * time_grid.center) * alternating * summed
    return values, grid


def displace(values, grid: _UniformGrid, shift: float, axis: int = -1, periodic: bool = False):
    """
    Translate samples along `axis` by `shift` (grid units): out(x) = in(x - shift).

    Whole-sample shifts move indices exactly (zero fill, or wrap-around when
    periodic). A fractional remainder is applied as a phase ramp in the
    conjugate domain. Returns (shifted, lost) where lost is the fraction of
    the squared norm pushed off the grid.
    """
    values = np.asarray(values, dtype=complex)
    _check_length(values, grid, axis)
    total = float(np.sum(np.abs(values) ** 2))
    if total == 0.0:
        return values.copy(), 0.0

    samples = shift / grid.step
    whole = int(np.round(samples))
    frac = samples - whole
    if abs(frac) < 1e-9:
        frac = 0.0

    out = values
    edge_loss = 0.0
    if frac != 0.0:
        if not periodic:
            # energy that the circular phase ramp would carry across the boundary
            edge = -1 if frac > 0 else 0
            edge_loss = abs(frac) * float(np.sum(np.abs(np.take(values, edge, axis=axis)) ** 2)) / total
        n = grid.n
        ramp = np.exp(-2j * np.pi * scipy.fft.fftfreq(n) * frac)
        shape = [1] * values.ndim
        shape[axis] = n
        out = scipy.fft.ifft(scipy.fft.fft(out, axis=axis) * ramp.reshape(shape), axis=axis)

    if whole != 0:
        if periodic:
            out = np.roll(out, whole, axis=axis)
        else:
            moved = np.zeros_like(out)
            n = grid.n
            src = [slice(None)] * out.ndim
            dst = [slice(None)] * out.ndim
            if abs(whole) < n:
                if whole > 0:
                    src[axis] = slice(0, n - whole)
                    dst[axis] = slice(whole, n)
                else:
                    src[axis] = slice(-whole, n)
                    dst[axis] = slice(0, n + whole)
                moved[tuple(dst)] = out[tuple(src)]
            out = moved

    kept = float(np.sum(np.abs(out) ** 2)) / total
    lost = max(0.0, 1.0 - kept) + edge_loss
    return out, min(lost, 1.0)
