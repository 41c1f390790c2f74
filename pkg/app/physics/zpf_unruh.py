"""Random-phase zeropoint field observed from a uniformly accelerated detector.

The field is a log-uniform sum of modes with random phases. Along the
detector's worldline every mode chirps, phi_n(tau) = (omega_n c / a) e^(-a tau / c),
and the windowed periodogram of the resulting signal is compared with the
thermal spectrum (hbar c / 2 Omega) coth(pi Omega c / a).

All transforms share one convention: a signal is detrended by its
window-weighted mean, then A(Omega) = (dtau / 2 pi) sum_j w_j g_j e^(-i Omega tau_j).
"""

import logging
import math
import numpy as np
from joblib import Parallel, delayed
from scipy import optimize
from scipy.signal import windows
from app.errors import DomainError, FitFailure, NyquistViolation
from app.models.constants import NATURAL, PhysicalConstants
from app.models.relativity import AcceleratedFrame
from app.models.zpf import (
    ModeSet,
    ObservationWindow,
    SpectrumEstimate,
    TemperatureFit,
    UnruhConfig,
)
from app.physics.gamma_integrals import complex_gamma
from app.physics.kinematics import RAPIDITY_LIMIT
from app.physics.rng import random_phase_amplitudes

logger = logging.getLogger(__name__)

NYQUIST_LIMIT = 0.3
MAX_DTAU = 0.02
MAX_WINDOW_SAMPLES = 200_000
FIT_RESIDUAL_LIMIT = 0.10
MIN_FIT_BINS = 8
# fixed work partitions; results do not depend on n_jobs
MODE_CHUNK = 64
REALIZATION_CHUNK = 16


# ---------------------------------------------------------------- modes


def build_modeset(
    omega_min: float,
    omega_max: float,
    delta_x: float,
    seed: int = 0,
    constants: PhysicalConstants = NATURAL,
    realization: int = 0,
) -> ModeSet:
    """omega_n = omega_min e^(n dx), C_n = sqrt(hbar c dx), alpha_n = e^(i theta_n)/sqrt(2)."""
    if not 0 < omega_min < omega_max:
        raise DomainError("need 0 < omega_min < omega_max", module=__name__)
    if not delta_x > 0:
        raise DomainError("delta_x must be positive", module=__name__)
    n_modes = int(math.floor(math.log(omega_max / omega_min) / delta_x + 1e-9)) + 1
    omegas = omega_min * np.exp(delta_x * np.arange(n_modes))
    weights = np.full(n_modes, math.sqrt(constants.hbar * constants.c * delta_x))
    logger.debug(f"Built {n_modes} modes on [{omega_min:g}, {omegas[-1]:g}]")
    return ModeSet(
        omegas=omegas,
        weights=weights,
        amplitudes=random_phase_amplitudes(n_modes, seed, realization),
        delta_x=delta_x,
        seed=seed,
        realization=realization,
    )


def amplitude_moments(
    n_modes: int, n_realizations: int, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Ensemble estimates of <alpha_n* alpha_m> and <alpha_n alpha_m>."""
    alphas = np.stack(
        [random_phase_amplitudes(n_modes, seed, i) for i in range(n_realizations)]
    )
    conjugate_product = alphas.conj().T @ alphas / n_realizations
    plain_product = alphas.T @ alphas / n_realizations
    return conjugate_product, plain_product


# ---------------------------------------------------------------- fields


def mode_phases(
    omegas, frame: AcceleratedFrame, tau, literal_phase: bool = False
) -> np.ndarray:
    """Chirp phase of every mode (rows) at every proper time (columns).

    The default drops the constant omega c / a, which only shifts the random
    phase: (omega c / a) expm1(-a tau / c), tending to -omega tau as a -> 0.
    """
    rate = frame.chirp_rate
    rapidity = rate * np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(np.abs(rapidity) > RAPIDITY_LIMIT):
        raise DomainError(f"|a tau / c| exceeds {RAPIDITY_LIMIT}", module=__name__)
    shape = np.exp(-rapidity) if literal_phase else np.expm1(-rapidity)
    return np.outer(np.asarray(omegas) / rate, shape)


def instantaneous_frequencies(omegas, frame: AcceleratedFrame, tau) -> np.ndarray:
    rapidity = frame.chirp_rate * np.atleast_1d(np.asarray(tau, dtype=float))
    return np.outer(omegas, np.exp(-rapidity))


def resolved_fade(frequencies, ceiling: float | None) -> np.ndarray:
    """1 below the ceiling, 0 above twice the ceiling, raised cosine in log2 between."""
    frequencies = np.asarray(frequencies, dtype=float)
    if ceiling is None:
        return np.ones_like(frequencies)
    octave = np.clip(np.log2(frequencies / ceiling), 0.0, 1.0)
    return 0.5 * (1.0 + np.cos(np.pi * octave))


def _phasors(modes, frame, tau, resolved_ceiling, literal_phase=False):
    phase = mode_phases(modes, frame, tau, literal_phase)
    fade = resolved_fade(instantaneous_frequencies(modes, frame, tau), resolved_ceiling)
    return fade * np.exp(1j * phase)


def eval_field_inertial(modes: ModeSet, t):
    """g(t) = sum_n C_n (alpha_n e^(-i omega_n t) + c.c.)."""
    times = np.atleast_1d(np.asarray(t, dtype=float))
    coefficients = modes.weights * modes.amplitudes
    field = 2.0 * np.real(coefficients @ np.exp(-1j * np.outer(modes.omegas, times)))
    return float(field[0]) if np.ndim(t) == 0 else field


def eval_field_accelerated(
    modes: ModeSet,
    frame: AcceleratedFrame,
    tau,
    literal_phase: bool = False,
    resolved_ceiling: float | None = None,
):
    """g(tau) = sum_n C_n chi_n(tau) (alpha_n e^(i phi_n(tau)) + c.c.).

    chi_n is 1 everywhere unless a resolved ceiling is given.
    """
    times = np.atleast_1d(np.asarray(tau, dtype=float))
    coefficients = modes.weights * modes.amplitudes
    field = np.zeros(len(times))
    for start in range(0, len(modes), MODE_CHUNK):
        part = slice(start, start + MODE_CHUNK)
        phasors = _phasors(
            modes.omegas[part], frame, times, resolved_ceiling, literal_phase
        )
        field += 2.0 * np.real(coefficients[part] @ phasors)
    return float(field[0]) if np.ndim(tau) == 0 else field


# ---------------------------------------------------------------- windows


def sampling_step(config: UnruhConfig, c: float = 1.0) -> float:
    """Largest dtau keeping the phase step of resolved content under max_phase_step."""
    if config.dtau is not None:
        return config.dtau
    ceiling = config.resolved_ceiling
    top = 2.0 * ceiling if ceiling is not None else config.mode_band(c)[1]
    return min(config.max_phase_step / (top + config.omega_out_max), MAX_DTAU)


def window_samples(t_obs: float, dtau: float) -> int:
    return int(math.ceil(t_obs / dtau - 1e-9)) + 1


def build_window(t_obs: float, dtau: float, kind: str = "hann") -> ObservationWindow:
    if kind != "hann":
        raise DomainError(f"unsupported window {kind}", module=__name__)
    if not (t_obs > 0 and dtau > 0):
        raise DomainError("t_obs and dtau must be positive", module=__name__)
    n_samples = window_samples(t_obs, dtau)
    if n_samples > MAX_WINDOW_SAMPLES:
        raise DomainError(
            f"{n_samples} window samples exceed {MAX_WINDOW_SAMPLES}", module=__name__
        )
    tau = np.linspace(0.0, t_obs, n_samples)
    step = t_obs / (n_samples - 1)
    weights = windows.hann(n_samples, sym=True)
    return ObservationWindow(
        kind=kind,
        t_obs=t_obs,
        dtau=step,
        tau=tau,
        weights=weights,
        noise_gain=float(np.sum(weights**2) * step / (2.0 * math.pi)),
        sinusoid_gain=float((np.sum(weights) * step / (2.0 * math.pi)) ** 2 / 2.0),
    )


def window_transform(t_obs: float, nu) -> np.ndarray:
    """Closed-form (1/2pi) integral of the Hann window times e^(-i nu tau) over [0, t_obs]."""
    nu = np.asarray(nu, dtype=float)
    q = nu * t_obs / (2.0 * math.pi)
    shape = 0.5 * np.sinc(q) + 0.25 * (np.sinc(q - 1.0) + np.sinc(q + 1.0))
    return t_obs / (2.0 * math.pi) * np.exp(-0.5j * nu * t_obs) * shape


def detrended_basis(window: ObservationWindow, omegas_out) -> np.ndarray:
    """(dtau / 2pi) w_j (e^(-i Omega tau_j) - m_Omega), one column per Omega."""
    omegas_out = np.asarray(omegas_out, dtype=float)
    carrier = np.exp(-1j * np.outer(window.tau, omegas_out))
    weights = window.weights[:, None]
    mean = np.sum(weights * carrier, axis=0) / np.sum(window.weights)
    return window.dtau / (2.0 * math.pi) * weights * (carrier - mean)


def series_periodogram(series, window: ObservationWindow, omegas_out) -> np.ndarray:
    """|A(Omega)|^2 of one sampled signal on the window grid."""
    return np.abs(np.asarray(series, dtype=float) @ detrended_basis(window, omegas_out)) ** 2


# ---------------------------------------------------------------- periodograms


def check_nyquist(
    modes: ModeSet,
    window: ObservationWindow,
    omega_out_max: float,
    resolved_ceiling: float | None = None,
) -> float:
    """Largest phase advance per sample over the resolved support; raises above 0.3 rad."""
    if len(modes) == 0:
        return 0.0
    support = modes.omegas
    if resolved_ceiling is not None:
        support = np.minimum(support, 2.0 * resolved_ceiling)
    steps = (support + omega_out_max) * window.dtau
    worst = int(np.argmax(steps))
    if steps[worst] > NYQUIST_LIMIT:
        raise NyquistViolation(
            f"mode {worst} (omega={modes.omegas[worst]:.6g}) advances "
            f"{steps[worst]:.3f} rad per sample, limit {NYQUIST_LIMIT}",
            mode_index=worst,
            frequency=float(modes.omegas[worst]),
            module=__name__,
        )
    return float(steps[worst])


def mode_transforms(
    modes: ModeSet,
    frame: AcceleratedFrame,
    window: ObservationWindow,
    omegas_out,
    resolved_ceiling: float | None = None,
    n_jobs: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Windowed transforms A_n^+ and A_n^- of e^(+-i phi_n), shape (modes, Omega)."""
    basis = detrended_basis(window, omegas_out)
    if len(modes) == 0:
        empty = np.zeros((0, basis.shape[1]), dtype=complex)
        return empty, empty.copy()

    def transform(part: slice):
        phasors = _phasors(modes.omegas[part], frame, window.tau, resolved_ceiling)
        return phasors @ basis, phasors.conj() @ basis

    parts = [slice(s, s + MODE_CHUNK) for s in range(0, len(modes), MODE_CHUNK)]
    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(transform)(part) for part in parts
    )
    a_plus = np.concatenate([plus for plus, _ in results])
    a_minus = np.concatenate([minus for _, minus in results])
    return a_plus, a_minus


def _expected_from_transforms(modes, a_plus, a_minus) -> np.ndarray:
    power = 0.5 * (np.abs(a_plus) ** 2 + np.abs(a_minus) ** 2)
    return (modes.weights**2) @ power


def expected_periodogram(
    modes: ModeSet,
    frame: AcceleratedFrame,
    window: ObservationWindow,
    omegas_out,
    resolved_ceiling: float | None = None,
    n_jobs: int = 1,
    with_theory: bool = True,
) -> SpectrumEstimate:
    """Ensemble-mean periodogram from <alpha* alpha> = 1/2, no sampling."""
    omegas_out = np.asarray(omegas_out, dtype=float)
    check_nyquist(modes, window, float(np.max(omegas_out)), resolved_ceiling)
    a_plus, a_minus = mode_transforms(
        modes, frame, window, omegas_out, resolved_ceiling, n_jobs
    )
    expected = _expected_from_transforms(modes, a_plus, a_minus)
    logger.info(f"Expected periodogram over {len(modes)} modes, {len(omegas_out)} bins")
    return SpectrumEstimate(
        omegas=omegas_out,
        expected=expected,
        seed=modes.seed,
        window=window,
        **(_theory_columns(frame, window, omegas_out) if with_theory else {}),
    )


def _realization_periodograms(modes, a_plus, a_minus, seed, indices) -> np.ndarray:
    alphas = np.stack(
        [random_phase_amplitudes(len(modes), seed, i) for i in indices]
    )
    coefficients = alphas * modes.weights
    transforms = coefficients @ a_plus + coefficients.conj() @ a_minus
    return np.abs(transforms) ** 2


def mc_periodogram(
    modes: ModeSet,
    frame: AcceleratedFrame,
    window: ObservationWindow,
    omegas_out,
    n_realizations: int,
    seed: int = 0,
    resolved_ceiling: float | None = None,
    n_jobs: int = 1,
    with_theory: bool = True,
) -> SpectrumEstimate:
    """Mean periodogram over fresh phase draws (seed, i), i < n_realizations.

    The transform of a realization is linear in its amplitudes, so it is
    assembled from the per-mode transforms shared with expected_periodogram.
    """
    if n_realizations < 2:
        raise DomainError("n_realizations must be >= 2", module=__name__)
    omegas_out = np.asarray(omegas_out, dtype=float)
    check_nyquist(modes, window, float(np.max(omegas_out)), resolved_ceiling)
    a_plus, a_minus = mode_transforms(
        modes, frame, window, omegas_out, resolved_ceiling, n_jobs
    )
    batches = [
        range(s, min(s + REALIZATION_CHUNK, n_realizations))
        for s in range(0, n_realizations, REALIZATION_CHUNK)
    ]
    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_realization_periodograms)(modes, a_plus, a_minus, seed, batch)
        for batch in batches
    )
    periodograms = np.concatenate(results)
    logger.info(f"Monte Carlo periodogram: {n_realizations} realizations, seed {seed}")
    return SpectrumEstimate(
        omegas=omegas_out,
        expected=_expected_from_transforms(modes, a_plus, a_minus),
        mc_mean=periodograms.mean(axis=0),
        mc_stderr=periodograms.std(axis=0, ddof=1) / math.sqrt(n_realizations),
        n_realizations=n_realizations,
        seed=seed,
        window=window,
        **(_theory_columns(frame, window, omegas_out) if with_theory else {}),
    )


def synthesize_field(
    modes: ModeSet,
    frame: AcceleratedFrame,
    window: ObservationWindow,
    resolved_ceiling: float | None = None,
) -> np.ndarray:
    """One realization of the detector signal on the window grid."""
    return eval_field_accelerated(
        modes, frame, window.tau, resolved_ceiling=resolved_ceiling
    )


# ---------------------------------------------------------------- theory


def theory_spectrum(frame: AcceleratedFrame, omega_out, constants=None):
    """(hbar c / 2 Omega) coth(pi Omega c / a)."""
    k = constants or frame.constants
    omega = np.asarray(omega_out, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("Omega must be positive", module=__name__)
    value = k.hbar * k.c / (2.0 * omega) / np.tanh(math.pi * omega * k.c / frame.a)
    return float(value) if np.ndim(omega_out) == 0 else value


def thermal_spectrum(omega, temperature: float, constants: PhysicalConstants = NATURAL):
    """(hbar c / 2 Omega) coth(hbar Omega / 2 k_b T); the zeropoint part alone at T = 0."""
    omega = np.asarray(omega, dtype=float)
    zeropoint = constants.hbar * constants.c / (2.0 * omega)
    if temperature == 0:
        return zeropoint
    return zeropoint / np.tanh(constants.hbar * omega / (2.0 * constants.k_b * temperature))


def convolution_kernel(
    window: ObservationWindow, omegas_out, oversample: int = 32, span_bins: int = 64
) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint grid on Omega' > 0 and weights K such that K @ S(grid) is the
    expected detrended periodogram of a stationary signal with even spectrum S."""
    omegas_out = np.asarray(omegas_out, dtype=float)
    t_obs = window.t_obs
    resolution = 2.0 * math.pi / t_obs
    h = resolution / oversample
    n_grid = int(math.ceil((np.max(omegas_out) + span_bins * resolution) / h))
    grid = (np.arange(n_grid) + 0.5) * h

    ratio = window_transform(t_obs, omegas_out) / window_transform(t_obs, 0.0)
    rows = omegas_out[:, None]
    positive = window_transform(t_obs, rows - grid) - ratio[:, None] * window_transform(
        t_obs, -grid
    )
    negative = window_transform(t_obs, rows + grid) - ratio[:, None] * window_transform(
        t_obs, grid
    )
    kernel = h * (np.abs(positive) ** 2 + np.abs(negative) ** 2)
    return grid, kernel


def convolved_spectrum(spectrum, window: ObservationWindow, omegas_out) -> np.ndarray:
    grid, kernel = convolution_kernel(window, omegas_out)
    return kernel @ spectrum(grid)


def _theory_columns(frame, window, omegas_out) -> dict:
    k = frame.constants
    return {
        "theory_raw": theory_spectrum(frame, omegas_out),
        "theory_convolved": convolved_spectrum(
            lambda grid: theory_spectrum(frame, grid), window, omegas_out
        ),
        "zeropoint_convolved": convolved_spectrum(
            lambda grid: thermal_spectrum(grid, 0.0, k), window, omegas_out
        ),
    }


def gamma_chain_residual(frame: AcceleratedFrame, omega_out: float) -> float:
    """(c / 2 pi a)^2 2 pi hbar a |Gamma(ix)|^2 cosh(pi x) against the thermal form, x = Omega c / a."""
    k = frame.constants
    x = omega_out * k.c / frame.a
    chain = (
        (k.c / (2.0 * math.pi * frame.a)) ** 2
        * 2.0
        * math.pi
        * k.hbar
        * frame.a
        * abs(complex_gamma(1j * x)) ** 2
        * math.cosh(math.pi * x)
    )
    closed_form = theory_spectrum(frame, omega_out)
    return abs(chain - closed_form) / closed_form


def fit_unruh_temperature(
    estimate: SpectrumEstimate,
    frame_guess: AcceleratedFrame,
    use: str = "expected",
    window: ObservationWindow | None = None,
) -> TemperatureFit:
    """Least-squares temperature of the window-convolved thermal family.

    Fits log T with relative weights over Omega in [0.5, 3] a/c. The
    convolution uses the estimate's own window unless one is passed.
    """
    window = estimate.window if window is None else window
    if window is None:
        raise FitFailure("estimate carries no observation window", module=__name__)
    k = frame_guess.constants
    values = estimate.mc_mean if use == "mc" else estimate.expected
    if values is None:
        raise FitFailure(f"estimate carries no {use} values", module=__name__)
    low, high = 0.5 * frame_guess.chirp_rate, 3.0 * frame_guess.chirp_rate
    mask = (estimate.omegas >= low * (1 - 1e-12)) & (estimate.omegas <= high * (1 + 1e-12))
    if np.count_nonzero(mask) < MIN_FIT_BINS:
        raise FitFailure(
            f"only {np.count_nonzero(mask)} bins in [{low:g}, {high:g}], need {MIN_FIT_BINS}",
            module=__name__,
        )
    omegas, data = estimate.omegas[mask], values[mask]
    grid, kernel = convolution_kernel(window, omegas)

    def model(_, log_temperature):
        return kernel @ thermal_spectrum(grid, math.exp(log_temperature), k)

    target = frame_guess.unruh_temperature()
    try:
        popt, pcov = optimize.curve_fit(
            model, omegas, data, p0=[math.log(target)], sigma=data, absolute_sigma=False
        )
    except (RuntimeError, ValueError) as e:
        raise FitFailure(f"curve_fit failed: {e}", module=__name__) from e

    temperature = math.exp(popt[0])
    residual = (model(None, popt[0]) - data) / data
    rms = float(np.sqrt(np.mean(residual**2)))
    if rms > FIT_RESIDUAL_LIMIT:
        raise FitFailure(
            f"RMS relative residual {rms:.3f} exceeds {FIT_RESIDUAL_LIMIT}", module=__name__
        )
    variance = float(pcov[0, 0]) if np.isfinite(pcov[0, 0]) else math.inf
    logger.info(f"Fitted T={temperature:.6g} (target {target:.6g}), RMS residual {rms:.2e}")
    return TemperatureFit(
        temperature=temperature,
        stderr=temperature * math.sqrt(max(variance, 0.0)),
        rms_residual=rms,
        n_bins=int(np.count_nonzero(mask)),
        target=target,
    )


# ---------------------------------------------------------------- diagnostics


def field_variance_theory(modes: ModeSet) -> float:
    """<g^2> = sum_n C_n^2 for the vacuum ensemble."""
    return float(np.sum(modes.weights**2))


def mc_field_variance(
    modes: ModeSet, t: float, n_realizations: int, seed: int = 0
) -> tuple[float, float]:
    """Ensemble mean of g(t)^2 over phase draws and its standard error."""
    phasors = np.exp(-1j * modes.omegas * t)
    alphas = np.stack(
        [random_phase_amplitudes(len(modes), seed, i) for i in range(n_realizations)]
    )
    samples = (2.0 * np.real((alphas * modes.weights) @ phasors)) ** 2
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n_realizations))


def structure_function(
    modes: ModeSet,
    frame: AcceleratedFrame,
    tau0: float,
    lags,
    resolved_ceiling: float | None = None,
) -> np.ndarray:
    """<(g(tau0 + s) - g(tau0))^2> = sum C^2 |chi_2 e^(i phi_2) - chi_1 e^(i phi_1)|^2."""
    lags = np.asarray(lags, dtype=float)
    times = np.concatenate([[tau0], tau0 + lags])
    phasors = _phasors(modes.omegas, frame, times, resolved_ceiling)
    increments = np.abs(phasors[:, 1:] - phasors[:, :1]) ** 2
    return (modes.weights**2) @ increments


def mc_structure_function(
    modes: ModeSet,
    frame: AcceleratedFrame,
    tau0: float,
    lags,
    n_realizations: int,
    seed: int = 0,
    resolved_ceiling: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and standard error of (g(tau0 + s) - g(tau0))^2."""
    lags = np.asarray(lags, dtype=float)
    times = np.concatenate([[tau0], tau0 + lags])
    phasors = _phasors(modes.omegas, frame, times, resolved_ceiling)
    alphas = np.stack(
        [random_phase_amplitudes(len(modes), seed, i) for i in range(n_realizations)]
    )
    fields = 2.0 * np.real((alphas * modes.weights) @ phasors)
    squares = (fields[:, 1:] - fields[:, :1]) ** 2
    return squares.mean(axis=0), squares.std(axis=0, ddof=1) / math.sqrt(n_realizations)


# ---------------------------------------------------------------- pipeline


def run_unruh_pipeline(
    config: UnruhConfig,
    seed: int = 0,
    constants: PhysicalConstants = NATURAL,
    monte_carlo: bool = False,
    n_jobs: int = 1,
) -> tuple[SpectrumEstimate, ObservationWindow, AcceleratedFrame]:
    """Build frame, modes and window from the config and estimate the spectrum."""
    frame = AcceleratedFrame(a=config.acceleration, constants=constants)
    omega_min, omega_max = config.mode_band(constants.c)
    modes = build_modeset(omega_min, omega_max, config.delta_x, seed, constants)
    window = build_window(config.t_obs, sampling_step(config, constants.c), config.window)
    logger.info(
        f"Unruh pipeline: {len(modes)} modes, {len(window.tau)} samples, "
        f"dtau={window.dtau:.4g}, ceiling={config.resolved_ceiling}"
    )
    if monte_carlo:
        estimate = mc_periodogram(
            modes,
            frame,
            window,
            config.omegas_out,
            config.n_realizations,
            seed,
            config.resolved_ceiling,
            n_jobs,
        )
    else:
        estimate = expected_periodogram(
            modes, frame, window, config.omegas_out, config.resolved_ceiling, n_jobs
        )
    return estimate, window, frame
