import math
import numpy as np
import pytest
from hypothesis import given, strategies as st
from app.errors import DomainError
from app.models.spectra import SpectralKind, ThermodynamicState
from app.physics.planck_classic import mean_energy_with_zeropoint
from app.physics.spectra import (
    cumulative_vacuum_energy,
    density_of_modes,
    power_spectrum_from_density,
    spectral_curve,
    spectral_density,
    thermal_excess,
    vacuum_energy_quadrature,
)


def test_density_of_modes_at_unit_frequency():
    assert density_of_modes(1.0) == pytest.approx(1.0 / (2.0 * math.pi**2), rel=1e-15)


def test_reference_values():
    assert spectral_density("zeropoint", 1.0, 0.0) == pytest.approx(0.0506606, abs=1e-7)
    assert spectral_density("planck_zp", 1.0, 1.0) == pytest.approx(0.1096272, abs=1e-7)
    assert spectral_density("rayleigh_jeans", 1.0, 1.0) == pytest.approx(1.0 / math.pi**2)


def test_planck_zp_at_zero_temperature_is_zeropoint():
    assert spectral_density(SpectralKind.PLANCK_ZP, 2.0, 0.0) == spectral_density(
        SpectralKind.ZEROPOINT, 2.0, 0.0
    )
    assert spectral_density(SpectralKind.PLANCK, 2.0, 0.0) == 0.0


def test_thermal_excess_tends_to_rayleigh_jeans():
    temperature = 1e4
    rayleigh_jeans = spectral_density("rayleigh_jeans", 1.0, temperature)
    assert thermal_excess(1.0, temperature) == pytest.approx(rayleigh_jeans, rel=1e-4)


@given(
    st.floats(min_value=1e-2, max_value=1e2),
    st.floats(min_value=1e-2, max_value=1e2),
)
def test_planck_zp_is_mode_count_times_mean_energy(omega, temperature):
    expected = 2.0 * density_of_modes(omega) * mean_energy_with_zeropoint(omega, temperature)
    assert spectral_density("planck_zp", omega, temperature) == pytest.approx(expected, rel=1e-14)


def test_spectral_curve_frame():
    curve = spectral_curve("planck", np.linspace(0.1, 5.0, 20), 1.5)
    frame = curve.to_frame()
    assert list(frame.columns) == ["omega", "value", "kind", "temperature"]
    assert (frame["kind"] == "planck").all()
    assert frame["value"].iloc[3] == pytest.approx(spectral_density("planck", frame["omega"].iloc[3], 1.5))


def test_vacuum_energy_grows_as_fourth_power():
    assert cumulative_vacuum_energy(2.0) / cumulative_vacuum_energy(1.0) == pytest.approx(16.0)
    assert vacuum_energy_quadrature(7.0) == pytest.approx(cumulative_vacuum_energy(7.0), rel=1e-10)


def test_power_spectrum_scaling():
    assert power_spectrum_from_density(3.0 / (2.0 * math.pi)) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "kind, omega, temperature",
    [
        ("estimated", 1.0, 1.0),
        ("rayleigh_jeans", 1.0, 0.0),
        ("zeropoint", 0.0, 1.0),
        ("planck_zp", 1.0, -1.0),
    ],
)
def test_invalid_requests(kind, omega, temperature):
    with pytest.raises(DomainError):
        spectral_density(kind, omega, temperature)


@pytest.mark.parametrize("kind", ["rayleigh_jeans", "zeropoint", "planck", "planck_zp"])
def test_state_and_bare_temperature_agree(kind):
    state = ThermodynamicState(temperature=1.0)
    assert spectral_density(kind, 2.0, state) == spectral_density(kind, 2.0, 1.0)


def test_zero_temperature_state_gives_zeropoint():
    state = ThermodynamicState(temperature=0.0)
    assert spectral_density("planck_zp", 1.0, state) == pytest.approx(1.0 / (2.0 * math.pi**2))
