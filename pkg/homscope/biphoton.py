# homscope/biphoton.py
"""
Single-photon spectral amplitudes and two-photon joint spectral amplitudes.

A JointSpectralAmplitude F[i, j] samples f(omega1_i, omega2_j) on two
frequency grids and is kept at unit norm

    sum |F|^2 * step1 * step2 = 1

The sum/difference frequencies follow a PMConvention:
omega+/- = (omega1 +/- omega2) / scale.
"""
from __future__ import annotations

import enum
import functools
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

import config
from homscope import sfgrid
from homscope.errors import (
    AccuracyError,
    ConfigError,
    DegenerateStateError,
    DimensionError,
    NumericalWarning,
)
from homscope.sfgrid import FrequencyGrid

LOGGER = logging.getLogger(__name__)


class PMConvention(enum.Enum):
    """How omega+ and omega- are built from the arm frequencies"""

    HALVED = "halved"  # (w1 +/- w2) / 2
    SUM_DIFFERENCE = "sum_difference"  # w1 +/- w2
    SYMMETRIC = "symmetric"  # (w1 +/- w2) / sqrt(2)

    @property
    def scale(self) -> float:
        return {
            PMConvention.HALVED: 2.0,
            PMConvention.SUM_DIFFERENCE: 1.0,
            PMConvention.SYMMETRIC: float(np.sqrt(2.0)),
        }[self]

    @property
    def jacobian(self) -> float:
        """|d(w1, w2) / d(w+, w-)|"""
        return self.scale ** 2 / 2.0

    def to_plus_minus(self, omega1, omega2):
        s = self.scale
        return (omega1 + omega2) / s, (omega1 - omega2) / s

    def to_arms(self, omega_plus, omega_minus):
        s = self.scale
        return s * (omega_plus + omega_minus) / 2.0, s * (omega_plus - omega_minus) / 2.0

    @classmethod
    def parse(cls, value) -> "PMConvention":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Frequency displacement mu and time delay tau"""

    mu: float
    tau: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.tau)):
            raise ValueError("phase-space coordinates must be finite")


def _freeze(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=complex)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class SpectralAmplitude:
    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = _freeze(self.values)
        if values.ndim != 1 or values.shape[0] != self.grid.n:
            raise DimensionError(
                f"amplitude of shape {values.shape} on a grid of {self.grid.n} points"
            )
        object.__setattr__(self, "values", values)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def norm(self) -> float:
        return sfgrid.norm(self.values, self.grid)

    def evaluate(self, omega) -> np.ndarray:
        """Linear interpolation of the samples, zero off the grid"""
        omega = np.asarray(omega, dtype=float)
        points = self.grid.points
        real = np.interp(omega, points, self.values.real, left=0.0, right=0.0)
        imag = np.interp(omega, points, self.values.imag, left=0.0, right=0.0)
        return real + 1j * imag


@dataclass(frozen=True)
class JointSpectralAmplitude:
    grid1: FrequencyGrid
    grid2: FrequencyGrid
    values: np.ndarray = field(repr=False)
    resampling_loss: float = 0.0

    def __post_init__(self):
        values = _freeze(self.values)
        if values.shape != (self.grid1.n, self.grid2.n):
            raise DimensionError(
                f"JSA of shape {values.shape} on grids of {self.grid1.n} x {self.grid2.n} points"
            )
        object.__setattr__(self, "values", values)

    @property
    def cell(self) -> float:
        return self.grid1.step * self.grid2.step

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))

    def same_grids(self) -> bool:
        return self.grid1.matches(self.grid2)


def normalize(amplitude):
    """Rescale a SpectralAmplitude or JointSpectralAmplitude to unit norm"""
    current = amplitude.norm()
    if not np.isfinite(current) or current == 0.0:
        raise DegenerateStateError("cannot normalize an amplitude with zero norm")
    if isinstance(amplitude, JointSpectralAmplitude):
        return JointSpectralAmplitude(
            amplitude.grid1, amplitude.grid2, amplitude.values / current, amplitude.resampling_loss
        )
    return SpectralAmplitude(amplitude.grid, amplitude.values / current)


def gaussian_amplitude(grid: FrequencyGrid, center: float = 0.0, width: float = 1.0,
                       delay: float = 0.0, unit_norm: bool = True) -> SpectralAmplitude:
    """
    g(w) ~ exp(-(w - center)^2 / (2 width^2)) * exp(-i (w - center) delay)

    |g|^2 has standard deviation width / sqrt(2); a positive delay moves the
    Wigner peak to tau = delay.
    """
    if width <= 0:
        raise ConfigError("gaussian width must be positive")
    sfgrid.check_coverage(grid, center, width, "gaussian amplitude")
    x = grid.points - center
    amplitude = SpectralAmplitude(grid, np.exp(-x ** 2 / (2.0 * width ** 2)) * np.exp(-1j * x * delay))
    return normalize(amplitude) if unit_norm else amplitude


def hermite_amplitude(grid: FrequencyGrid, center: float = 0.0, width: float = 1.0,
                      delay: float = 0.0) -> SpectralAmplitude:
    """First Hermite-Gauss mode, odd about `center`"""
    if width <= 0:
        raise ConfigError("hermite width must be positive")
    sfgrid.check_coverage(grid, center, width, "hermite amplitude")
    x = grid.points - center
    values = (x / width) * np.exp(-x ** 2 / (2.0 * width ** 2)) * np.exp(-1j * x * delay)
    return normalize(SpectralAmplitude(grid, values))


def separable_jsa(f: SpectralAmplitude, g: SpectralAmplitude, phase: float = 0.0) -> JointSpectralAmplitude:
    """f(w1) g(w2) exp(i phase), normalized"""
    values = np.outer(f.values, g.values) * np.exp(1j * phase)
    return normalize(JointSpectralAmplitude(f.grid, g.grid, values))


def default_arm_grid(f_plus: SpectralAmplitude, f_minus: SpectralAmplitude,
                     convention: PMConvention = PMConvention.HALVED) -> FrequencyGrid:
    """
    Common arm grid for jsa_from_pm: step scale * step(f-), centered on the
    degenerate frequency scale * center(f+) / 2.
    """
    s = convention.scale
    n = max(f_plus.grid.n, f_minus.grid.n)
    step = s * f_minus.grid.step
    return FrequencyGrid(n, s * f_plus.grid.center / 2.0, n * step)


def jsa_from_pm(f_plus: SpectralAmplitude, f_minus: SpectralAmplitude,
                convention: PMConvention = PMConvention.HALVED,
                grid: FrequencyGrid | None = None) -> JointSpectralAmplitude:
    """
    F(w1, w2) = f+(w+) f-(w-) sampled on a square arm grid and normalized.

    Off-grid lookups of f+ and f- are linear interpolations, zero outside
    their grids. A NumericalWarning reports norm lost to either grid.
    """
    convention = PMConvention.parse(convention)
    if grid is None:
        grid = default_arm_grid(f_plus, f_minus, convention)
    w1, w2 = np.meshgrid(grid.points, grid.points, indexing="ij")
    w_plus, w_minus = convention.to_plus_minus(w1, w2)
    values = f_plus.evaluate(w_plus) * f_minus.evaluate(w_minus)
    jsa = JointSpectralAmplitude(grid, grid, values)

    expected = convention.jacobian ** -1 * (f_plus.norm() * f_minus.norm()) ** 2
    lost = 1.0 - jsa.norm() ** 2 / expected if expected > 0 else 1.0
    if lost > config.numeric("max_norm_loss"):
        message = f"jsa_from_pm: {lost:.3%} of the norm falls outside the arm grid"
        LOGGER.warning(message)
        warnings.warn(message, NumericalWarning, stacklevel=2)
    return normalize(jsa)


def swap(jsa: JointSpectralAmplitude) -> JointSpectralAmplitude:
    """F'(w1, w2) = F(w2, w1)"""
    if not jsa.same_grids():
        raise DimensionError("swap needs both arms on the same grid")
    return JointSpectralAmplitude(jsa.grid2, jsa.grid1, jsa.values.T, jsa.resampling_loss)


def is_symmetric(jsa: JointSpectralAmplitude, atol: float = 1e-10) -> bool:
    return jsa.same_grids() and bool(np.allclose(jsa.values, jsa.values.T, atol=atol, rtol=0.0))


def frequency_beam_splitter(jsa: JointSpectralAmplitude,
                            convention: PMConvention = PMConvention.HALVED,
                            plus_grid: FrequencyGrid | None = None,
                            minus_grid: FrequencyGrid | None = None) -> JointSpectralAmplitude:
    """
    Re-express F(w1, w2) in (w+, w-) coordinates.

    The returned object stores sqrt(J) F(w1(w+, w-), w2(w+, w-)) with grid1
    the w+ grid and grid2 the w- grid, so the norm is preserved up to the
    resampling loss it records. The default output grids sample the arm
    grids exactly.
    """
    convention = PMConvention.parse(convention)
    s = convention.scale
    g1, g2 = jsa.grid1, jsa.grid2
    if plus_grid is None:
        plus_grid = FrequencyGrid(g1.n, (g1.center + g2.center) / s, g1.n * 2.0 * g1.step / s)
    if minus_grid is None:
        minus_grid = FrequencyGrid(g2.n, (g1.center - g2.center) / s, g2.n * 2.0 * g2.step / s)

    wp, wm = np.meshgrid(plus_grid.points, minus_grid.points, indexing="ij")
    w1, w2 = convention.to_arms(wp, wm)
    query = np.stack([w1.ravel(), w2.ravel()], axis=-1)
    interpolated = np.zeros(query.shape[0], dtype=complex)
    for part, unit in ((jsa.values.real, 1.0), (jsa.values.imag, 1j)):
        interpolator = RegularGridInterpolator(
            (g1.points, g2.points), part, method="linear", bounds_error=False, fill_value=0.0
        )
        interpolated += unit * interpolator(query)
    values = np.sqrt(convention.jacobian) * interpolated.reshape(wp.shape)

    out = JointSpectralAmplitude(plus_grid, minus_grid, values)
    loss = max(0.0, 1.0 - out.norm() ** 2 / jsa.norm() ** 2)
    if loss > config.numeric("max_norm_loss"):
        raise AccuracyError(f"frequency beam splitter lost {loss:.3%} of the norm while resampling")
    LOGGER.debug("frequency beam splitter resampling loss %.3e", loss)
    return JointSpectralAmplitude(plus_grid, minus_grid, values, loss)


@functools.lru_cache(maxsize=16)
def _diagonal_index(n: int) -> np.ndarray:
    i, j = np.indices((n, n))
    index = (i - j + n - 1).ravel()
    index.setflags(write=False)
    return index


def exchange_diagonals(values: np.ndarray):
    """
    D_r = sum over i - j = r of F_ij conj(F_ji), for r = -(n-1) .. n-1.

    Returns (r, D). The exchange overlap at delay tau is
    step^2 * sum_r D_r exp(i r step tau).
    """
    values = np.asarray(values, dtype=complex)
    n = values.shape[0]
    if values.shape != (n, n):
        raise DimensionError("exchange overlap needs a square JSA")
    product = (values * np.conj(values.T)).ravel()
    index = _diagonal_index(n)
    real = np.bincount(index, weights=product.real, minlength=2 * n - 1)
    imag = np.bincount(index, weights=product.imag, minlength=2 * n - 1)
    return np.arange(-(n - 1), n), real + 1j * imag


def exchange_overlap(jsa: JointSpectralAmplitude, tau: float = 0.0) -> complex:
    """integral F(w1, w2) conj(F(w2, w1)) exp(i (w1 - w2) tau)"""
    if not jsa.same_grids():
        raise DimensionError("exchange overlap needs both arms on the same grid")
    r, diagonals = exchange_diagonals(jsa.values)
    step = jsa.grid1.step
    return complex(step ** 2 * np.sum(diagonals * np.exp(1j * r * step * tau)))


def shift_arm(jsa: JointSpectralAmplitude, arm: int, mu: float):
    """
    Frequency-displace one arm: F'(w1, w2) = F(w1, w2 - mu) for arm 2.

    Returns (values, lost) with lost the fraction of the norm shifted off
    the grid.
    """
    if arm not in (1, 2):
        raise ValueError("arm must be 1 or 2")
    grid = jsa.grid1 if arm == 1 else jsa.grid2
    return sfgrid.displace(jsa.values, grid, mu, axis=arm - 1)


@dataclass(frozen=True)
class SchmidtDecomposition:
    weights: np.ndarray  # sum to one, descending
    modes1: np.ndarray  # rows are unit-norm amplitudes on grid1
    modes2: np.ndarray

    @property
    def number(self) -> float:
        return float(1.0 / np.sum(self.weights ** 2))


def schmidt_decomposition(jsa: JointSpectralAmplitude, rank: int | None = None) -> SchmidtDecomposition:
    """Singular-value decomposition of the step-weighted JSA"""
    matrix = jsa.values * np.sqrt(jsa.cell)
    u, singular, vh = np.linalg.svd(matrix, full_matrices=False)
    if singular.size == 0 or singular[0] == 0.0:
        raise DegenerateStateError("Schmidt decomposition of a zero JSA")
    keep = singular > 1e-12 * singular[0]
    if rank is not None:
        keep[rank:] = False
    weights = singular[keep] ** 2
    weights = weights / np.sum(weights)
    modes1 = u[:, keep].T / np.sqrt(jsa.grid1.step)
    modes2 = vh[keep, :] / np.sqrt(jsa.grid2.step)
    return SchmidtDecomposition(weights, modes1, modes2)


def schmidt_number(jsa: JointSpectralAmplitude) -> float:
    """K = 1 / sum p_k^2; exactly 1 for separable states"""
    return schmidt_decomposition(jsa).number
