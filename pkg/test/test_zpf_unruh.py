import math
import numpy as np
import pytest
from app.errors import DomainError, FitFailure, NyquistViolation
from app.models.relativity import AcceleratedFrame
from app.models.zpf import SpectrumEstimate, UnruhConfig
from app.physics import kinematics
from app.physics.zpf_unruh import (
    amplitude_moments,
    build_modeset,
    build_window,
    check_nyquist,
    convolved_spectrum,
    detrended_basis,
    eval_field_accelerated,
    eval_field_inertial,
    expected_periodogram,
    field_variance_theory,
    fit_unruh_temperature,
    gamma_chain_residual,
    mc_field_variance,
    mc_periodogram,
    mc_structure_function,
    mode_phases,
    mode_transforms,
    resolved_fade,
    run_unruh_pipeline,
    sampling_step,
    series_periodogram,
    structure_function,
    synthesize_field,
    theory_spectrum,
    thermal_spectrum,
    window_transform,
)

OMEGAS_OUT = np.linspace(0.5, 3.0, 6)


@pytest.fixture
def modes():
    return build_modeset(0.1, 50.0, 0.1, seed=3)


@pytest.fixture
def short_window():
    return build_window(4.0, 0.005)


def test_log_uniform_modes():
    modes = build_modeset(1.0, math.e, 0.1, seed=0)
    assert len(modes) == 11
    assert modes.omegas[-1] == pytest.approx(math.e)
    assert np.allclose(np.diff(np.log(modes.omegas)), 0.1)
    assert np.allclose(modes.weights, math.sqrt(0.1))
    assert np.allclose(np.abs(modes.amplitudes), 1.0 / math.sqrt(2.0))


def test_modeset_rejects_empty_band():
    with pytest.raises(DomainError):
        build_modeset(2.0, 1.0, 0.1)


def test_default_mode_band_and_step():
    config = UnruhConfig()
    omega_min, omega_max = config.mode_band()
    assert omega_min == pytest.approx(0.025)
    assert omega_max == pytest.approx(12.0 * math.exp(12.0))
    assert sampling_step(config) == pytest.approx(0.25 / 99.0)
    assert sampling_step(config.model_copy(update={"dtau": 0.001})) == 0.001


def test_fade_profile():
    fade = resolved_fade([1.0, 2.0, 2.0 * math.sqrt(2.0), 4.0, 8.0], 2.0)
    assert np.allclose(fade, [1.0, 1.0, 0.5, 0.0, 0.0], atol=1e-15)
    assert np.array_equal(resolved_fade([1.0, 1e9], None), [1.0, 1.0])


def test_shifted_phase_tends_to_inertial_phase():
    slow = AcceleratedFrame(a=1e-6)
    tau = np.linspace(0.0, 4.0, 9)
    phase = mode_phases([1.0, 7.0], slow, tau)
    assert np.allclose(phase, -np.outer([1.0, 7.0], tau), rtol=1e-5, atol=1e-12)


def test_literal_phase_is_chirp_phase(frame):
    tau = np.array([0.0, 0.7, 3.0])
    phase = mode_phases([2.0], frame, tau, literal_phase=True)[0]
    assert np.allclose(phase, kinematics.chirp_phase(frame, 2.0, tau), rtol=1e-14)


def test_phase_guard(frame):
    with pytest.raises(DomainError):
        mode_phases([1.0], frame, [40.0])


def test_slowly_accelerated_field_matches_inertial(modes):
    tau = np.linspace(0.0, 4.0, 50)
    accelerated = eval_field_accelerated(modes, AcceleratedFrame(a=1e-9), tau)
    assert np.allclose(accelerated, eval_field_inertial(modes, tau), atol=1e-4)
    assert isinstance(eval_field_inertial(modes, 0.3), float)


def test_window_grid_and_gains():
    window = build_window(12.0, 12.0 / 20000)
    assert len(window.tau) == 20001
    assert window.tau[0] == 0.0 and window.tau[-1] == 12.0
    assert window.weights[0] == pytest.approx(0.0, abs=1e-15)
    assert window.noise_gain == pytest.approx(3.0 * 12.0 / (16.0 * math.pi), rel=1e-3)
    assert window.sinusoid_gain == pytest.approx((6.0 / (2.0 * math.pi)) ** 2 / 2.0, rel=1e-3)


def test_window_kind_is_hann_only():
    with pytest.raises(DomainError):
        build_window(12.0, 0.01, kind="boxcar")


def test_detrended_basis_removes_constants(short_window):
    basis = detrended_basis(short_window, OMEGAS_OUT)
    assert np.max(np.abs(np.ones(len(short_window.tau)) @ basis)) <= 1e-14


@pytest.mark.parametrize("g", [0.3, 1.7, 6.0])
def test_discrete_transform_matches_closed_form(g):
    window = build_window(12.0, 12.0 / 20000)
    omegas = np.array([0.5, 1.0, 2.5])
    discrete = np.exp(1j * g * window.tau) @ detrended_basis(window, omegas)
    ratio = window_transform(12.0, omegas) / window_transform(12.0, 0.0)
    closed = window_transform(12.0, omegas - g) - ratio * window_transform(12.0, -g)
    assert np.allclose(discrete, closed, rtol=0, atol=1e-6 * 12.0 / (2.0 * math.pi))


def test_flat_spectrum_convolves_to_noise_gain():
    window = build_window(12.0, 0.01)
    flat = convolved_spectrum(np.ones_like, window, np.array([2.0]))
    assert flat[0] == pytest.approx(3.0 * 12.0 / (16.0 * math.pi), rel=1e-2)


def test_nyquist_guard(modes):
    coarse = build_window(4.0, 0.05)
    with pytest.raises(NyquistViolation) as info:
        check_nyquist(modes, coarse, 3.0)
    assert info.value.mode_index == len(modes) - 1
    assert info.value.frequency == pytest.approx(modes.omegas[-1])


def test_fade_relaxes_nyquist_guard(modes):
    window = build_window(4.0, 0.04)
    assert check_nyquist(modes, window, 3.0, resolved_ceiling=2.0) == pytest.approx(0.28)
    with pytest.raises(NyquistViolation):
        check_nyquist(modes, window, 3.0)


def test_thermal_family_contains_theory(frame):
    omegas = np.linspace(0.1, 5.0, 30)
    assert np.allclose(
        thermal_spectrum(omegas, frame.unruh_temperature()), theory_spectrum(frame, omegas), rtol=1e-12
    )
    assert np.allclose(thermal_spectrum(omegas, 0.0), 0.5 / omegas)


def test_theory_needs_positive_frequency(frame):
    with pytest.raises(DomainError):
        theory_spectrum(frame, 0.0)


@pytest.mark.parametrize("omega", [0.05, 0.5, 1.0, 3.0, 8.0])
def test_gamma_chain_reaches_thermal_form(frame, omega):
    assert gamma_chain_residual(frame, omega) <= 1e-9


def test_synthesized_series_has_mode_sum_periodogram(modes, short_window, frame):
    series = synthesize_field(modes, frame, short_window)
    direct = series_periodogram(series, short_window, OMEGAS_OUT)
    a_plus, a_minus = mode_transforms(modes, frame, short_window, OMEGAS_OUT)
    coefficients = modes.amplitudes * modes.weights
    linear = np.abs(coefficients @ a_plus + coefficients.conj() @ a_minus) ** 2
    assert np.allclose(direct, linear, rtol=1e-8, atol=1e-12 * np.max(linear))


def test_mode_transforms_do_not_depend_on_workers(modes, short_window, frame):
    serial = mode_transforms(modes, frame, short_window, OMEGAS_OUT, n_jobs=1)
    threaded = mode_transforms(modes, frame, short_window, OMEGAS_OUT, n_jobs=2)
    assert np.array_equal(serial[0], threaded[0]) and np.array_equal(serial[1], threaded[1])


def test_monte_carlo_is_reproducible(modes, short_window, frame):
    first = mc_periodogram(modes, frame, short_window, OMEGAS_OUT, 40, seed=9, with_theory=False)
    second = mc_periodogram(
        modes, frame, short_window, OMEGAS_OUT, 40, seed=9, n_jobs=2, with_theory=False
    )
    assert np.array_equal(first.mc_mean, second.mc_mean)
    assert np.array_equal(first.mc_stderr, second.mc_stderr)
    expected = expected_periodogram(modes, frame, short_window, OMEGAS_OUT, with_theory=False)
    assert np.allclose(first.expected, expected.expected, rtol=1e-12)


def test_monte_carlo_needs_two_realizations(modes, short_window, frame):
    with pytest.raises(DomainError):
        mc_periodogram(modes, frame, short_window, OMEGAS_OUT, 1)


def test_amplitude_moments():
    conjugate, plain = amplitude_moments(5, 2000, seed=1)
    assert np.allclose(np.diag(conjugate), 0.5)
    assert np.max(np.abs(plain)) < 0.06
    off_diagonal = conjugate - np.diag(np.diag(conjugate))
    assert np.max(np.abs(off_diagonal)) < 0.06


def test_field_variance_matches_mode_sum(modes):
    mean, stderr = mc_field_variance(modes, 0.7, 4000, seed=5)
    assert abs(mean - field_variance_theory(modes)) <= 5.0 * stderr
    assert field_variance_theory(modes) == pytest.approx(len(modes) * 0.1)


def test_structure_function_matches_monte_carlo(modes, frame):
    lags = np.array([0.05, 0.3, 1.0])
    analytic = structure_function(modes, frame, 1.0, lags)
    mean, stderr = mc_structure_function(modes, frame, 1.0, lags, 2000, seed=2)
    assert np.all(np.abs(mean - analytic) <= 5.0 * stderr)
    assert np.all(analytic > 0)


def test_fit_recovers_temperature_from_exact_theory(frame):
    window = build_window(12.0, 0.01)
    omegas = np.linspace(0.5, 3.0, 26)
    theory = convolved_spectrum(lambda grid: theory_spectrum(frame, grid), window, omegas)
    fit = fit_unruh_temperature(SpectrumEstimate(omegas=omegas, expected=theory, window=window), frame)
    assert fit.relative_error <= 1e-6
    assert fit.n_bins == 26


def test_fit_needs_enough_bins(frame):
    window = build_window(12.0, 0.01)
    omegas = np.linspace(0.5, 3.0, 5)
    estimate = SpectrumEstimate(omegas=omegas, expected=theory_spectrum(frame, omegas), window=window)
    with pytest.raises(FitFailure):
        fit_unruh_temperature(estimate, frame)


@pytest.fixture(scope="module")
def default_expected():
    return run_unruh_pipeline(UnruhConfig())


@pytest.fixture(scope="module")
def default_mc():
    return run_unruh_pipeline(UnruhConfig(), seed=7, monte_carlo=True)


@pytest.mark.slow
def test_expected_periodogram_follows_convolved_theory(default_expected):
    estimate, _, _ = default_expected
    error = np.abs(estimate.expected - estimate.theory_convolved) / estimate.theory_convolved
    assert np.max(error) <= 0.03


@pytest.mark.slow
def test_expected_periodogram_is_not_bare_zeropoint(default_expected):
    estimate, _, _ = default_expected
    excess = estimate.expected[0] / estimate.zeropoint_convolved[0] - 1.0
    assert estimate.omegas[0] == 0.5
    assert excess > 0.15


@pytest.mark.slow
def test_unruh_temperature_recovered(default_expected):
    estimate, window, frame = default_expected
    assert estimate.window is window
    fit = fit_unruh_temperature(estimate, frame)
    assert fit.relative_error <= 0.15
    assert fit.target == pytest.approx(1.0 / (2.0 * math.pi))


@pytest.mark.slow
def test_monte_carlo_agrees_with_expectation(default_mc):
    estimate, _, _ = default_mc
    within = np.abs(estimate.mc_mean - estimate.expected) <= 4.0 * estimate.mc_stderr
    assert np.mean(within) >= 0.95
    frame = estimate.to_frame()
    assert list(frame.columns) == [
        "omega_out",
        "expected",
        "mc_mean",
        "mc_stderr",
        "theory_convolved",
        "theory_raw",
    ]


@pytest.mark.slow
def test_monte_carlo_does_not_depend_on_workers(default_mc):
    estimate, _, _ = default_mc
    threaded, _, _ = run_unruh_pipeline(UnruhConfig(), seed=7, monte_carlo=True, n_jobs=2)
    assert np.array_equal(estimate.mc_mean, threaded.mc_mean)


def _default_modes(config, seed=5):
    omega_min, omega_max = config.mode_band()
    return build_modeset(omega_min, omega_max, config.delta_x, seed=seed)


def test_structure_function_is_stationary_across_origins(frame):
    config = UnruhConfig()
    modes = _default_modes(config)
    lags = np.array([0.5, 1.0, 2.0])
    early, late = (
        structure_function(modes, frame, fraction * config.t_obs, lags, config.resolved_ceiling)
        for fraction in (0.1, 0.3)
    )
    assert np.all(np.diff(early) > 0)
    assert np.allclose(early, late, rtol=2e-3)


def test_structure_function_at_shifted_origin_matches_monte_carlo(frame):
    config = UnruhConfig()
    modes = _default_modes(config)
    lags = np.array([0.5, 1.0, 2.0])
    tau0 = 0.3 * config.t_obs
    analytic = structure_function(modes, frame, tau0, lags, config.resolved_ceiling)
    mean, stderr = mc_structure_function(
        modes, frame, tau0, lags, 400, seed=11, resolved_ceiling=config.resolved_ceiling
    )
    assert np.all(np.abs(mean - analytic) <= 5.0 * stderr)


def test_single_mode_peak_uses_sinusoid_gain():
    t_obs = 12.0
    window = build_window(t_obs, 0.01)
    # eight whole cycles: Hann sidelobes vanish at the image and at DC
    omega = 2.0 * math.pi * 8.0 / t_obs
    one_mode = build_modeset(omega, 1.01 * omega, 0.5, seed=4)
    assert len(one_mode) == 1
    resolution = 2.0 * math.pi / t_obs
    omegas_out = omega + resolution * np.arange(-4, 5) / 4.0
    peak = one_mode.weights[0] ** 2 * window.sinusoid_gain

    series = eval_field_inertial(one_mode, window.tau)
    periodogram = series_periodogram(series, window, omegas_out)
    assert int(np.argmax(periodogram)) == 4
    assert periodogram[4] == pytest.approx(peak, rel=1e-3)

    expected = expected_periodogram(
        one_mode, AcceleratedFrame(a=1e-9), window, omegas_out, with_theory=False
    )
    assert int(np.argmax(expected.expected)) == 4
    assert expected.expected[4] == pytest.approx(peak, rel=1e-3)


def test_mc_stderr_shrinks_with_realizations(modes, frame, short_window):
    omegas_out = np.linspace(0.5, 3.0, 40)
    few = np.mean(
        [
            mc_periodogram(modes, frame, short_window, omegas_out, 2, seed=s, with_theory=False).mc_stderr
            for s in range(50)
        ]
    )
    many = np.mean(
        mc_periodogram(modes, frame, short_window, omegas_out, 100, seed=0, with_theory=False).mc_stderr
    )
    # n = 2 underestimates sigma (|x1 - x2| / 2 for exponential bins), so the
    # ratio sits between 5 and sqrt(50)
    assert 3.0 < few / many < 9.0
