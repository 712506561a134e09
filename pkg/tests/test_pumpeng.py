import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homscope import biphoton, chronowigner, pumpeng, sfgrid
from homscope.errors import (
    ConfigError,
    DegenerateStateError,
    NumericalWarning,
    ResolutionError,
)
from homscope.pumpeng import CavityConfig, DeviceConfig, Detuning, PumpBeam
from homscope.sfgrid import FrequencyGrid, TimeGrid

# module-level copies of the fixtures for hypothesis tests
DEVICE = DeviceConfig.from_degeneracy(100.0, 1.0, 10.0, 0.3, c=1.0)
GRID = FrequencyGrid(256, 0.0, 20.0)


@pytest.fixture
def device():
    # toy units: v = c = 1, omega_p = 10
    return DeviceConfig.from_degeneracy(100.0, 1.0, 10.0, 0.3, c=1.0)


@pytest.fixture
def grid():
    return FrequencyGrid(256, 0.0, 20.0)


def test_degeneracy_beam_is_phase_matched_at_zero(device):
    beam = PumpBeam(2.0, device.theta_deg)
    tau0, omega0, delta_omega = pumpeng.gaussian_parameters(beam, device)
    assert tau0 == 0.0
    assert omega0 == pytest.approx(0.0, abs=1e-12)
    assert delta_omega == pytest.approx(np.cos(0.3))


def test_gaussian_parameters_of_tilted_displaced_beam(device):
    beam = PumpBeam(2.0, 0.32, z0=5.0)
    tau0, omega0, delta_omega = pumpeng.gaussian_parameters(beam, device)
    assert tau0 == pytest.approx(5.0)
    assert omega0 == pytest.approx(10.0 * (np.sin(0.32) - np.sin(0.3)))
    assert delta_omega == pytest.approx(np.cos(0.32))


@pytest.mark.parametrize("method", ["fft", "quadrature"])
def test_numeric_phase_matching_matches_closed_form(device, grid, method):
    beams = [PumpBeam(2.0, 0.32, z0=5.0)]
    z = pumpeng.z_grid(device, beams)
    profile = pumpeng.pump_profile(beams, z, device)
    numeric = pumpeng.phase_matching_amplitude(profile, z, device, grid, method=method, beams=beams)
    closed = pumpeng.gaussian_fminus(beams[0], device, grid)
    overlap = sfgrid.inner_product(closed.values, numeric.values, grid)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-6)
    # the carrier phase is part of the closed form, not only the envelope
    assert overlap.real == pytest.approx(1.0, abs=1e-6)


def test_fft_and_quadrature_phase_matching_agree(device, grid):
    beams = pumpeng.time_cat_beams(device, 2.0, 20.0)
    z = pumpeng.z_grid(device, beams)
    profile = pumpeng.pump_profile(beams, z, device)
    fast = pumpeng.phase_matching_amplitude(profile, z, device, grid, "fft", beams, unit_norm=False)
    slow = pumpeng.phase_matching_amplitude(profile, z, device, grid, "quadrature", beams, unit_norm=False)
    np.testing.assert_allclose(fast.values, slow.values, atol=1e-9 * np.max(np.abs(slow.values)))


@settings(max_examples=100, deadline=None)
@given(
    waist=st.floats(1.5, 4.0),
    tilt=st.floats(-0.05, 0.05),
    z0=st.floats(-20.0, 20.0),
    pair=st.booleans(),
)
def test_fft_and_quadrature_phase_matching_agree_on_random_beams(waist, tilt, z0, pair):
    beams = [PumpBeam(waist, 0.3 + tilt, z0)]
    if pair:
        beams.append(PumpBeam(waist, 0.3 - tilt, -z0, 1j))
    z = pumpeng.z_grid(DEVICE, beams)
    profile = pumpeng.pump_profile(beams, z, DEVICE)
    fast = pumpeng.phase_matching_amplitude(profile, z, DEVICE, GRID, "fft", beams, unit_norm=False)
    slow = pumpeng.phase_matching_amplitude(profile, z, DEVICE, GRID, "quadrature", beams, unit_norm=False)
    np.testing.assert_allclose(fast.values, slow.values, atol=1e-9 * np.max(np.abs(slow.values)))


def test_wigner_peak_sits_at_closed_form_coordinates(device, grid):
    beam = PumpBeam(2.0, 0.32, z0=5.0)
    tau0, omega0, _ = pumpeng.gaussian_parameters(beam, device)
    fminus = pumpeng.gaussian_fminus(beam, device, grid)
    mu_grid = FrequencyGrid(64, 0.0, 4.0)
    tau_grid = TimeGrid(64, 5.0, 8.0)
    wmap = chronowigner.wigner_map(fminus, mu_grid, tau_grid)
    t, m = np.unravel_index(np.argmax(wmap.values), wmap.values.shape)
    assert abs(mu_grid.points[m] - omega0) <= mu_grid.step
    assert abs(tau_grid.points[t] - tau0) <= tau_grid.step


def test_time_cat_components_are_orthogonal(device, grid):
    beams = pumpeng.time_cat_beams(device, 2.0, 20.0)
    assert pumpeng.orthogonality_defect(beams, device, grid) < 1e-6
    cat = pumpeng.cat_fminus(beams, device, grid)
    assert cat.norm() == pytest.approx(1.0)


def test_frequency_cat_components_sit_symmetrically(device, grid):
    beams = pumpeng.frequency_cat_beams(device, 4.0, 0.1)
    omegas = [pumpeng.gaussian_parameters(beam, device)[1] for beam in beams]
    assert omegas[0] < 0 < omegas[1]
    cat = pumpeng.cat_fminus(beams, device, grid)
    intensity = np.abs(cat.values) ** 2
    for omega0 in omegas:
        assert np.interp(omega0, grid.points, intensity) > 0.8 * np.max(intensity)
    assert np.interp(0.0, grid.points, intensity) < 0.01 * np.max(intensity)


def test_compass_needs_four_beams(device, grid):
    beams = pumpeng.compass_beams(device, 4.0, 0.1, 20.0)
    assert len(beams) == 4
    assert pumpeng.compass_fminus(beams, device, grid).norm() == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        pumpeng.cat_fminus(beams, device, grid)
    with pytest.raises(ConfigError):
        pumpeng.compass_fminus(beams[:2], device, grid)


def test_superposition_reports_its_defect(device, grid):
    beams = [PumpBeam(2.0, 0.3, z0=-1.0), PumpBeam(2.0, 0.3, z0=1.0)]
    amplitude, defect = pumpeng.superpose_fminus(beams, device, grid)
    assert amplitude.norm() == pytest.approx(1.0)
    assert 0.1 < defect < 1.0


@pytest.mark.parametrize(
    "factory",
    [
        lambda: DeviceConfig(0.0, 1.0, 0.0, 10.0, 0.3, 1.0),
        lambda: DeviceConfig(10.0, -1.0, 0.0, 10.0, 0.3, 1.0),
        lambda: DeviceConfig(10.0, 1.0, 0.0, 10.0, 2.0, 1.0),
        lambda: PumpBeam(0.0, 0.3),
        lambda: PumpBeam(1.0, np.pi / 2),
        lambda: CavityConfig(1.0, 2.0),
        lambda: CavityConfig(0.5, 0.0),
    ],
)
def test_invalid_parameters_are_config_errors(factory):
    with pytest.raises(ConfigError):
        factory()


def test_coarse_z_lattice_is_rejected(device, grid):
    beams = [PumpBeam(2.0, 0.32)]
    z = np.linspace(-50.0, 50.0, 20)
    with pytest.raises(ResolutionError):
        pumpeng.phase_matching_amplitude(pumpeng.pump_profile(beams, z, device), z, device, grid, beams=beams)


def test_truncated_profile_warns(device, grid):
    beams = [PumpBeam(2.0, 0.32, z0=50.0)]
    z = -60.0 + 0.1 * np.arange(1201)
    with pytest.warns(NumericalWarning):
        pumpeng.phase_matching_amplitude(pumpeng.pump_profile(beams, z, device), z, device, grid, beams=beams)


def test_unknown_phase_matching_method(device, grid):
    beams = [PumpBeam(2.0, 0.3)]
    z = pumpeng.z_grid(device, beams)
    with pytest.raises(ConfigError):
        pumpeng.phase_matching_amplitude(pumpeng.pump_profile(beams, z, device), z, device, grid, "czt")


def test_fplus_is_the_normalized_pump_spectrum(grid):
    pump = biphoton.gaussian_amplitude(grid, 0.0, 1.0, unit_norm=False)
    assert pumpeng.fplus_from_pump_spectrum(pump).norm() == pytest.approx(1.0)


def test_cavity_transmission_on_and_off_resonance():
    cavity = CavityConfig(0.3, 2.0)
    assert pumpeng.cavity_transmission(0.0, cavity) == pytest.approx(1.0)
    assert abs(pumpeng.cavity_transmission(np.pi, cavity)) == pytest.approx(0.7 / 1.3)
    shifted = CavityConfig(0.3, 2.0, Detuning.ANTI_RESONANT)
    assert abs(pumpeng.cavity_transmission(0.0, shifted)) == pytest.approx(0.7 / 1.3)
    assert cavity.free_spectral_range == pytest.approx(2 * np.pi)


def test_cavity_echo_height_follows_reflectivity():
    grid = FrequencyGrid(512, 0.0, 128.0)
    cavity = CavityConfig(0.3, 2.0)
    photon = pumpeng.cavity_comb(biphoton.gaussian_amplitude(grid, 0.0, 8.0), cavity)
    assert pumpeng.echo_ratio(photon, cavity) == pytest.approx(0.3, rel=0.05)


def test_cavity_comb_needs_resolved_teeth():
    grid = FrequencyGrid(64, 0.0, 128.0)
    with pytest.raises(ResolutionError):
        pumpeng.cavity_comb(biphoton.gaussian_amplitude(grid, 0.0, 8.0), CavityConfig(0.3, 2.0))


def test_echo_ratio_without_main_pulse():
    grid = FrequencyGrid(512, 0.0, 128.0)
    cavity = CavityConfig(0.3, 2.0)
    with pytest.raises(DegenerateStateError):
        pumpeng.echo_ratio(biphoton.SpectralAmplitude(grid, np.zeros(grid.n)), cavity)
