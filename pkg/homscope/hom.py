# homscope/hom.py
"""
Generalized Hong-Ou-Mandel coincidence probability.

Arm 2 is displaced in frequency by mu and arm 1 delayed by tau, giving

    C(mu, tau) = 1/2 - 1/2 Re integral F'(w1, w2) conj(F'(w2, w1)) exp(i (w1 - w2) tau)

with F'(w1, w2) = F(w1, w2 - mu). The exchange integral only depends on the
index difference i - j, so each (mu, tau) costs one pass over the diagonal
sums of F'.
"""
from __future__ import annotations

import contextvars
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

import config
from homscope import sfgrid
from homscope.biphoton import (
    JointSpectralAmplitude,
    PhaseSpacePoint,
    PMConvention,
    SpectralAmplitude,
    exchange_diagonals,
    separable_jsa,
    shift_arm,
)
from homscope.errors import AccuracyError, DimensionError
from homscope.sfgrid import _UniformGrid

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoincidenceMap:
    """C sampled on (tau, mu); values has shape (n_tau, n_mu)"""

    mu_grid: _UniformGrid
    tau_grid: _UniformGrid
    values: np.ndarray = field(repr=False)
    convention: PMConvention = PMConvention.HALVED

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.tau_grid.n, self.mu_grid.n):
            raise DimensionError(
                f"map of shape {values.shape} for {self.tau_grid.n} delays x {self.mu_grid.n} shifts"
            )
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise AccuracyError("coincidence map values must lie in [0, 1]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def phase_space_to_arm(mu: float, tau, convention: PMConvention = PMConvention.HALVED):
    """
    Arm displacement and delay that reach the phase-space point (mu, tau) of
    f- for a state built with jsa_from_pm: (scale * mu, 2 * tau / scale).
    """
    s = PMConvention.parse(convention).scale
    return s * mu, 2.0 * np.asarray(tau) / s


def _as_points(taus) -> np.ndarray:
    if isinstance(taus, _UniformGrid):
        return taus.points
    return np.atleast_1d(np.asarray(taus, dtype=float))


def _shifted(jsa: JointSpectralAmplitude, mu: float, arm: int) -> np.ndarray:
    if not jsa.same_grids():
        raise DimensionError("HOM interference needs both arms on the same grid")
    if mu == 0.0:
        return jsa.values
    values, lost = shift_arm(jsa, arm, mu)
    if lost > config.numeric("max_norm_loss"):
        raise AccuracyError(f"frequency shift {mu:.6g} moves {lost:.3%} of the norm off the grid")
    if lost > 0.0:
        LOGGER.debug("frequency shift %.6g lost %.3e of the norm", mu, lost)
    return values


def checked_probability(raw, upper: float = 1.0, what: str = "coincidence"):
    """
    Clip rounding noise off raw values in [0, upper]; anything further out
    than the clamp tolerance means an unnormalized input and raises.
    """
    raw = np.asarray(raw, dtype=float)
    tolerance = config.numeric("clamp_tolerance")
    if np.any(raw < -tolerance) or np.any(raw > upper + tolerance):
        worst = raw.flat[np.argmax(np.maximum(-raw, raw - upper))]
        raise AccuracyError(f"raw {what} {worst:.3e} outside [0, {upper:g}]; state is not normalized")
    return np.clip(raw, 0.0, upper)


def parallel_map(function, items, threads: int = 1) -> list:
    """Ordered map over `items`; each task runs in a copy of the caller's context"""
    items = list(items)
    if threads <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(contextvars.copy_context().run, function, item) for item in items]
        return [future.result() for future in futures]


def _coincidence_curve(values: np.ndarray, step: float, taus: np.ndarray) -> np.ndarray:
    r, diagonals = exchange_diagonals(values)
    overlap = step ** 2 * (np.exp(1j * np.outer(taus, r) * step) @ diagonals)
    return checked_probability(0.5 - 0.5 * overlap.real)


def coincidence(jsa: JointSpectralAmplitude, point: PhaseSpacePoint, arm: int = 2) -> float:
    """C at one (mu, tau) in arm coordinates; `arm` picks the displaced arm"""
    values = _shifted(jsa, point.mu, arm)
    return float(_coincidence_curve(values, jsa.grid1.step, np.array([point.tau]))[0])


def hom_scan(jsa: JointSpectralAmplitude, taus, mu: float = 0.0, arm: int = 2) -> np.ndarray:
    """C(mu, tau) for every delay in `taus` (a grid or an array)"""
    values = _shifted(jsa, mu, arm)
    return _coincidence_curve(values, jsa.grid1.step, _as_points(taus))


def coincidence_map(jsa: JointSpectralAmplitude, mu_grid: _UniformGrid, tau_grid: _UniformGrid,
                    convention: PMConvention = PMConvention.HALVED, threads: int = 1) -> CoincidenceMap:
    """
    C over phase-space coordinates: every (mu, tau) is mapped to the arm
    displacement and delay of phase_space_to_arm before evaluation.

    Columns are computed concurrently and stored by index, so the result
    does not depend on `threads`.
    """
    convention = PMConvention.parse(convention)
    step = jsa.grid1.step

    def column(mu):
        arm_mu, arm_taus = phase_space_to_arm(mu, tau_grid.points, convention)
        return _coincidence_curve(_shifted(jsa, arm_mu, 2), step, arm_taus)

    columns = parallel_map(column, mu_grid.points, threads)
    LOGGER.info("coincidence map %d x %d computed on %d thread(s)", tau_grid.n, mu_grid.n, threads)
    return CoincidenceMap(mu_grid, tau_grid, np.stack(columns, axis=1), convention)


def independent_source_dip(g: SpectralAmplitude, taus) -> np.ndarray:
    """
    Dip of two independent photons with the same spectrum g, evaluated from
    the time-domain overlap: C = 1/2 (1 - |integral g~(t) conj(g~(t - tau)) dt|^2).
    """
    reference, time_grid = sfgrid.fourier_to_time(g.values, g.grid)
    curve = []
    for tau in _as_points(taus):
        delayed, _ = sfgrid.fourier_to_time(g.values * np.exp(1j * g.grid.points * tau), g.grid)
        overlap = sfgrid.inner_product(delayed, reference, time_grid)
        curve.append(0.5 * (1.0 - abs(overlap) ** 2))
    return checked_probability(curve, what="dip")


def separable_dip(g: SpectralAmplitude, taus) -> np.ndarray:
    """Same dip from the frequency-domain coincidence of g x g"""
    return hom_scan(separable_jsa(g, g), taus)


def spectrogram(f: SpectralAmplitude, window: SpectralAmplitude, point: PhaseSpacePoint) -> float:
    """
    S(mu, tau) = 1/2 (1 - |integral f(w) conj(window(w - mu)) exp(i w tau) dw|^2)

    Equal to the coincidence of the separable state f x window at (mu, tau).
    """
    if not f.grid.matches(window.grid):
        raise DimensionError("signal and window must share a grid")
    shifted, lost = sfgrid.displace(window.values, window.grid, point.mu)
    if lost > config.numeric("max_norm_loss"):
        raise AccuracyError(f"window shift {point.mu:.6g} moves {lost:.3%} of its norm off the grid")
    gated = sfgrid.integrate(f.values * np.conj(shifted) * np.exp(1j * f.grid.points * point.tau), f.grid)
    return float(checked_probability(0.5 * (1.0 - abs(gated) ** 2), upper=0.5, what="spectrogram"))


def spectrogram_map(f: SpectralAmplitude, window: SpectralAmplitude,
                    mu_grid: _UniformGrid, tau_grid: _UniformGrid, threads: int = 1) -> np.ndarray:
    """S on (tau, mu); shape (n_tau, n_mu). Columns are independent of `threads`."""
    if not f.grid.matches(window.grid):
        raise DimensionError("signal and window must share a grid")
    kernel = np.exp(1j * np.outer(tau_grid.points, f.grid.points))

    def column(mu):
        shifted, lost = sfgrid.displace(window.values, window.grid, mu)
        if lost > config.numeric("max_norm_loss"):
            raise AccuracyError(f"window shift {mu:.6g} moves {lost:.3%} of its norm off the grid")
        gated = kernel @ (f.values * np.conj(shifted)) * f.grid.step
        return 0.5 * (1.0 - np.abs(gated) ** 2)

    out = np.stack(parallel_map(column, mu_grid.points, threads), axis=1)
    return checked_probability(out, upper=0.5, what="spectrogram")
