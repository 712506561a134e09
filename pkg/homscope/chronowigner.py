# homscope/chronowigner.py
"""
Chronocyclic Wigner function of a single-photon spectral amplitude

    W(mu, tau) = integral g(mu + x) conj(g(mu - x)) exp(2 i x tau) dx

W is real, bounded by one in magnitude for a unit-norm g, and equals
1 - 2 C for the coincidence map of a state built with jsa_from_pm.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

import config
from homscope import sfgrid
from homscope.biphoton import (
    JointSpectralAmplitude,
    PhaseSpacePoint,
    PMConvention,
    SpectralAmplitude,
    exchange_diagonals,
)
from homscope.errors import AccuracyError, ConfigError, DimensionError, NumericalWarning
from homscope.hom import CoincidenceMap
from homscope.sfgrid import _UniformGrid

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class WignerMap:
    """W sampled on (tau, mu); values has shape (n_tau, n_mu)"""

    mu_grid: _UniformGrid
    tau_grid: _UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.tau_grid.n, self.mu_grid.n):
            raise DimensionError(
                f"map of shape {values.shape} for {self.tau_grid.n} delays x {self.mu_grid.n} shifts"
            )
        if np.max(np.abs(values), initial=0.0) > 1.0 + config.numeric("clamp_tolerance"):
            raise AccuracyError("|W| exceeds one; the amplitude is not normalized")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


class WitnessResult(NamedTuple):
    fired: bool
    points: list


def _correlation_rows(g: SpectralAmplitude, mus: np.ndarray):
    """h[a, m] = g(mu_a + x_m) conj(g(mu_a - x_m)) with x_m = m * step, |m| <= n"""
    step = g.grid.step
    n = g.grid.n
    x = np.arange(-n, n + 1) * step
    upper = g.evaluate(mus[:, None] + x[None, :])
    lower = g.evaluate(mus[:, None] - x[None, :])
    return upper * np.conj(lower), x


def _warn_outside(g: SpectralAmplitude, mus: np.ndarray):
    outside = (mus < g.grid.first) | (mus > g.grid.last)
    if np.any(outside):
        message = f"{int(np.sum(outside))} mu value(s) lie outside the amplitude grid; g is zero-padded there"
        LOGGER.warning(message)
        warnings.warn(message, NumericalWarning, stacklevel=3)


def wigner_point(g: SpectralAmplitude, point: PhaseSpacePoint) -> float:
    """W at one (mu, tau) by direct quadrature"""
    mus = np.array([point.mu])
    _warn_outside(g, mus)
    h, x = _correlation_rows(g, mus)
    value = np.sum(h[0] * np.exp(2j * x * point.tau)) * g.grid.step
    return float(value.real)


def wigner_point_symmetric(g: SpectralAmplitude, point: PhaseSpacePoint) -> float:
    """
    Half-argument form 1/2 integral g(mu + w/2) conj(g(mu - w/2)) exp(i tau w) dw,
    sampled on a w lattice of twice the grid step. Same value as wigner_point.
    """
    step = 2.0 * g.grid.step
    w = np.arange(-g.grid.n, g.grid.n + 1) * step
    integrand = g.evaluate(point.mu + w / 2.0) * np.conj(g.evaluate(point.mu - w / 2.0))
    value = 0.5 * np.sum(integrand * np.exp(1j * point.tau * w)) * step
    return float(value.real)


def wigner_map(g: SpectralAmplitude, mu_grid: _UniformGrid, tau_grid: _UniformGrid,
               method: str = "fft") -> WignerMap:
    """
    W on a (tau, mu) lattice. "fft" evaluates every row with the chirp-z
    transform, "quadrature" with an explicit exponential kernel.
    """
    mus = mu_grid.points
    _warn_outside(g, mus)
    h, x = _correlation_rows(g, mus)
    step = g.grid.step
    if method == "fft":
        rows = sfgrid.chirp_transform(
            h, x[0], step, 2.0 * tau_grid.first, 2.0 * tau_grid.step, tau_grid.n, sign=1, axis=1
        )
    elif method == "quadrature":
        rows = h @ np.exp(2j * np.outer(x, tau_grid.points))
    else:
        raise ConfigError(f"unknown wigner method '{method}'")
    values = (rows * step).real.T
    return WignerMap(mu_grid, tau_grid, values)


def wigner_from_hom(cmap: CoincidenceMap) -> WignerMap:
    """W = 1 - 2 C"""
    return WignerMap(cmap.mu_grid, cmap.tau_grid, 1.0 - 2.0 * cmap.values)


def marginals(wmap: WignerMap):
    """
    (spectral, temporal) marginals: integral W dtau / pi = |g(mu)|^2 and
    integral W dmu / pi = |g~(-tau)|^2.
    """
    spectral = wmap.values.sum(axis=0) * wmap.tau_grid.step / np.pi
    temporal = wmap.values.sum(axis=1) * wmap.mu_grid.step / np.pi
    total = float(np.sum(spectral) * wmap.mu_grid.step)
    if abs(total - 1.0) > 1e-3:
        message = f"Wigner map holds {total:.4f} of the norm; extend the grids"
        LOGGER.warning(message)
        warnings.warn(message, NumericalWarning, stacklevel=2)
    return spectral, temporal


def negativity_volume(wmap: WignerMap) -> float:
    """Volume of the negative part of W"""
    return float(np.sum(np.maximum(0.0, -wmap.values)) * wmap.mu_grid.step * wmap.tau_grid.step)


def witness(data, tolerance: float | None = None) -> WitnessResult:
    """
    Non-classicality witness: fires where C > 1/2 + tolerance, or where
    W < -2 tolerance for a Wigner map.
    """
    if tolerance is None:
        tolerance = config.numeric("witness_tolerance")
    if isinstance(data, CoincidenceMap):
        mask = data.values > 0.5 + tolerance
    elif isinstance(data, WignerMap):
        mask = data.values < -2.0 * tolerance
    else:
        raise TypeError(f"witness expects a CoincidenceMap or WignerMap, got {type(data).__name__}")
    taus = data.tau_grid.points
    mus = data.mu_grid.points
    points = [(float(mus[m]), float(taus[t])) for t, m in zip(*np.nonzero(mask))]
    return WitnessResult(bool(points), points)


def reduced_minus_amplitude_product(jsa: JointSpectralAmplitude,
                                    convention: PMConvention = PMConvention.HALVED):
    """
    K(w-) = integral F(w+, w-) conj(F(w+, -w-)) dw+, the w+-traced product the
    HOM delay scans. Returns (w- samples, K).
    """
    convention = PMConvention.parse(convention)
    if not jsa.same_grids():
        raise DimensionError("the traced product needs both arms on the same grid")
    r, diagonals = exchange_diagonals(jsa.values)
    step = jsa.grid1.step
    s = convention.scale
    return r * step / s, diagonals * step * s
