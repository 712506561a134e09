import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homscope import biphoton, classical, hom
from homscope.classical import CoherentInput, PhaseDistribution, PhaseKind
from homscope.errors import ConfigError, DegenerateStateError
from homscope.sfgrid import FrequencyGrid, TimeGrid

GRID = FrequencyGrid(256, 0.0, 32.0)
PULSE = biphoton.gaussian_amplitude(GRID, 0.0, 1.0)


def test_phase_moments():
    assert PhaseDistribution.uniform().moments == classical.PhaseMoments(0j, 0j)
    moments = PhaseDistribution.two_point(0.0, np.pi).moments
    assert moments.m1 == pytest.approx(0.0, abs=1e-15)
    assert moments.m2 == pytest.approx(1.0)
    assert PhaseDistribution.fixed(np.pi / 2).moments.m1 == pytest.approx(1j)


def test_phase_distribution_checks_phase_count():
    with pytest.raises(ConfigError):
        PhaseDistribution(PhaseKind.TWO_POINT, (0.0,))


@pytest.mark.parametrize(
    "phase, expected",
    [
        (PhaseDistribution.uniform(), 0.5),
        (PhaseDistribution.two_point(0.0, np.pi), 0.0),
        (PhaseDistribution.two_point(np.pi / 2, 3 * np.pi / 2), 1.0),
    ],
)
def test_correlation_at_zero_delay(phase, expected):
    source = CoherentInput(PULSE, phase)
    assert classical.intensity_correlation(source, 0.0) == pytest.approx(expected, abs=1e-12)


def test_uniform_phase_dip_has_half_visibility():
    times = TimeGrid(200, 0.0, 12.0)
    curve = classical.correlation_scan(CoherentInput(PULSE, PhaseDistribution.uniform()), times.points)
    assert classical.visibility(curve) == pytest.approx(0.5, rel=1e-3)
    assert np.all((curve >= 0.5 - 1e-12) & (curve <= 1.0 + 1e-12))


def test_two_point_phase_reaches_full_visibility():
    times = TimeGrid(200, 0.0, 12.0)
    source = CoherentInput(PULSE, PhaseDistribution.two_point(0.0, np.pi))
    assert classical.visibility(classical.correlation_scan(source, times.points)) == pytest.approx(1.0, abs=1e-3)


def test_fixed_phase_scan_is_flat_through_zero_delay():
    times = TimeGrid(200, 0.0, 12.0)
    for phase in (0.0, np.pi, 0.7):
        source = CoherentInput(PULSE, PhaseDistribution.fixed(phase))
        np.testing.assert_array_equal(classical.correlation_scan(source, times.points), 1.0)


def test_two_point_moments_average_the_fixed_ones():
    a, b = 0.3, 2.1
    two = PhaseDistribution.two_point(a, b).moments
    first, second = PhaseDistribution.fixed(a).moments, PhaseDistribution.fixed(b).moments
    assert two.m1 == pytest.approx(0.5 * (first.m1 + second.m1), abs=1e-15)
    assert two.m2 == pytest.approx(0.5 * (first.m2 + second.m2), abs=1e-15)
    # coinciding points collapse to the fixed phase
    same = CoherentInput(PULSE, PhaseDistribution.two_point(a, a + 2 * np.pi))
    np.testing.assert_allclose(classical.correlation_scan(same, [-1.0, 0.0, 1.0]), 1.0)


@settings(max_examples=100, deadline=None)
@given(t=st.floats(-10.0, 10.0), ratio=st.floats(0.2, 5.0))
def test_second_order_correlation_stays_in_upper_half(t, ratio):
    beta = biphoton.gaussian_amplitude(GRID, 0.5, 1.0)
    scaled = biphoton.SpectralAmplitude(GRID, ratio * beta.values)
    source = CoherentInput(PULSE, PhaseDistribution.uniform(), scaled)
    value = classical.second_order_only_correlation(source, t)
    assert 0.5 - 1e-12 <= value <= 1.0 + 1e-12


def test_second_order_scan_matches_uniform_phase():
    source = CoherentInput(PULSE, PhaseDistribution.two_point(0.0, np.pi))
    uniform = CoherentInput(PULSE, PhaseDistribution.uniform())
    times = np.linspace(-3.0, 3.0, 13)
    np.testing.assert_allclose(
        classical.correlation_scan(source, times, second_order_only=True),
        classical.correlation_scan(uniform, times),
        atol=1e-12,
    )


def test_coherent_input_needs_light():
    dark = biphoton.SpectralAmplitude(GRID, np.zeros(GRID.n))
    with pytest.raises(DegenerateStateError):
        CoherentInput(dark, PhaseDistribution.uniform())


def test_visibility_edge_cases():
    with pytest.raises(ValueError):
        classical.visibility([1.0, 0.5])
    with pytest.raises(DegenerateStateError):
        classical.visibility(np.zeros(20))


def test_biphoton_moments_reproduce_coincidence_probability():
    jsa = biphoton.separable_jsa(PULSE, PULSE)
    for t in (0.0, 0.4, 1.5):
        moments = classical.biphoton_moments(jsa, t)
        assert moments.mean_total == 2.0
        assert moments.mean_interference == 0j
        expected = hom.hom_scan(jsa, [t])[0]
        assert classical.biphoton_intensity_correlation(jsa, t) == pytest.approx(expected, abs=1e-12)


def test_biphoton_beats_the_classical_bound():
    jsa = biphoton.separable_jsa(PULSE, PULSE)
    quantum = classical.biphoton_intensity_correlation(jsa, 0.0)
    uniform = classical.intensity_correlation(CoherentInput(PULSE, PhaseDistribution.uniform()), 0.0)
    assert quantum < 0.5 <= uniform


def test_biphoton_correlation_of_an_entangled_pair():
    grid = FrequencyGrid(64, 0.0, 8.0)
    f_plus = biphoton.gaussian_amplitude(grid, 0.0, 0.5)
    f_minus = biphoton.gaussian_amplitude(grid, 0.25, 0.5, delay=0.4)
    jsa = biphoton.jsa_from_pm(f_plus, f_minus)
    for t in (-0.8, 0.0, 0.3, 1.2):
        expected = 0.5 - 0.5 * biphoton.exchange_overlap(jsa, t).real
        assert classical.biphoton_intensity_correlation(jsa, t) == pytest.approx(expected, abs=1e-12)
        assert classical.biphoton_intensity_correlation(jsa, t) == pytest.approx(hom.hom_scan(jsa, [t])[0], abs=1e-12)
