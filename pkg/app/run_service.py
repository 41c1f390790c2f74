import logging
import math
import os
import time
from pathlib import Path
import numpy as np
import pandas as pd
from app import __version__
from app.emitters import emit, run_metadata
from app.errors import ZpfError
from app.interfaces import RunConfig
from app.models.constants import PhysicalConstants
from app.models.fluctuations import EnergyDistribution
from app.models.relativity import AcceleratedFrame, Boost, WaveVector4
from app.models.reports import CheckResult, RunReport
from app.models.spectra import SpectralKind
from app.models.zpf import SpectrumEstimate
from app.physics import (
    fluctuations,
    gamma_integrals,
    invariance,
    kinematics,
    planck_classic,
    spectra,
    zpf_unruh,
)

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = "output"
REGULARIZED_PARAMETERS = (0.5, 0.25 + 0.3j, 0.9, 0.05 + 1.0j)
CONTOUR_CASES = ((20.0, 1e-4), (40.0, 1e-8))
N_ENERGY_SAMPLES = 100_000


def _directions(n: int) -> np.ndarray:
    """n unit vectors spread over the sphere (Fibonacci lattice)."""
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azimuth = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack(
        [np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)]
    )


def default_output_path(config: RunConfig) -> Path:
    if config.output_path:
        return Path(config.output_path)
    directory = os.getenv("ZPF_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)
    return Path(directory) / f"{config.command}.{config.format}"


class RunService:
    """
    Runs one command: computes its result, checks it against the module oracles
    and hands the result to the emitters.
    """

    @staticmethod
    def spectra(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        params = config.spectra
        omegas = np.geomspace(params.omega_min, params.omega_max, params.n_omega)
        curve = spectra.spectral_curve(params.kind, omegas, params.temperature, k)

        temperature = 1.0
        omega = 1e-3 * k.k_b * temperature / k.hbar
        thermal = k.k_b * temperature
        limit = abs(planck_classic.mean_energy_with_zeropoint(omega, temperature, k) - thermal)
        half_quantum = 0.5 * k.hbar * omega
        deficit = planck_classic.high_temperature_deficit(omega, temperature, k)

        invariant = max(
            abs(
                spectra.spectral_density(SpectralKind.PLANCK_ZP, w, temperature, k)
                - 2.0
                * spectra.density_of_modes(w, k)
                * planck_classic.mean_energy_with_zeropoint(w, temperature, k)
            )
            / spectra.spectral_density(SpectralKind.PLANCK_ZP, w, temperature, k)
            for w in omegas
        )
        cutoff = omegas[-1]
        vacuum = spectra.cumulative_vacuum_energy(cutoff, k)
        checks = [
            CheckResult.within(
                "planck_high_temperature_limit", spectra.__name__, limit / thermal, tol.planck_limit
            ),
            CheckResult.within(
                "planck_zeropoint_deficit",
                planck_classic.__name__,
                abs(deficit + half_quantum) / half_quantum,
                tol.planck_deficit,
            ),
            CheckResult.within(
                "planck_zp_mode_product", spectra.__name__, invariant, 1e-12
            ),
            CheckResult.within(
                "vacuum_energy_quadrature",
                spectra.__name__,
                abs(spectra.vacuum_energy_quadrature(cutoff, k) - vacuum) / vacuum,
                1e-10,
            ),
        ]
        return curve, checks

    @staticmethod
    def ode(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        p = config.ode
        rho_start = spectra.spectral_density(SpectralKind.PLANCK_ZP, p.omega, p.t_start, k)
        trajectory = fluctuations.solve_spectrum_ode(
            p.omega, p.t_start, p.t_end, rho_start, p.steps, k, include_zeropoint=True
        )

        rj_start = spectra.spectral_density(SpectralKind.RAYLEIGH_JEANS, p.omega, p.t_start, k)
        classical = fluctuations.solve_spectrum_ode(
            p.omega, p.t_start, p.t_end, rj_start, p.steps, k, include_zeropoint=False
        )
        rayleigh_jeans = np.array(
            [
                spectra.spectral_density(SpectralKind.RAYLEIGH_JEANS, p.omega, t, k)
                for t in classical.temperatures
            ]
        )
        checks = [
            CheckResult.within(
                "ode_coth_closed_form",
                fluctuations.__name__,
                float(np.max(trajectory.relative_error)),
                tol.ode,
            ),
            CheckResult.within(
                "ode_classical_rayleigh_jeans",
                fluctuations.__name__,
                float(np.max(np.abs(classical.values - rayleigh_jeans) / rayleigh_jeans)),
                tol.rayleigh_jeans,
            ),
        ]
        result = trajectory if p.include_zeropoint else classical
        return result, checks

    @staticmethod
    def invariance(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        zeropoint, quadratic = invariance.canonical_models(k)[1:]
        rows = []
        for beta in np.linspace(-0.9, 0.9, 20):
            boost = Boost(beta=float(beta))
            for index, direction in enumerate(_directions(20)):
                w = WaveVector4.light_like(1.0, direction, k)
                rows.append(
                    {
                        "beta": float(beta),
                        "direction": index,
                        "residual_zeropoint": invariance.lorentz_residual(zeropoint, boost, w, k),
                        "residual_quadratic": invariance.lorentz_residual(quadratic, boost, w, k),
                    }
                )
        table = pd.DataFrame(rows)

        along_x = WaveVector4.light_like(1.0, (1.0, 0.0, 0.0), k)
        discrimination = abs(invariance.lorentz_residual(quadratic, Boost(beta=0.6), along_x, k))

        first, second = Boost(beta=0.3), Boost(beta=0.5)
        w = WaveVector4.light_like(2.0, (0.6, 0.8, 0.0), k)
        twice = invariance.boost_wavevector(invariance.boost_wavevector(w, first, k), second, k)
        once = invariance.boost_wavevector(w, invariance.compose_boosts(first, second), k)
        checks = [
            CheckResult.within(
                "lorentz_linear_spectrum",
                invariance.__name__,
                float(table["residual_zeropoint"].abs().max()),
                tol.lorentz,
            ),
            CheckResult(
                name="lorentz_quadratic_discriminated",
                module=invariance.__name__,
                passed=discrimination >= tol.lorentz_discrimination,
                residual=discrimination,
                tolerance=tol.lorentz_discrimination,
                detail="residual must be at least the tolerance",
            ),
            CheckResult.within(
                "boost_composition",
                invariance.__name__,
                abs(twice.omega - once.omega) / once.omega,
                1e-12,
            ),
        ]
        return table, checks

    @staticmethod
    def wien(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        coefficient = spectra.spectral_density(SpectralKind.ZEROPOINT, 1.0, 0.0, k)

        def cubic(omega):
            return coefficient * omega**3

        planck_zp = invariance.planck_zp_density(k)
        rows = []
        for omega in np.geomspace(0.1, 10.0, 12):
            omega = float(omega)
            for lam in (0.5, 2.0, 10.0):
                rows.append(
                    {
                        "omega": omega,
                        "lambda": lam,
                        "adiabatic_relative": abs(
                            invariance.wien_adiabatic_delta(cubic, omega, 1.0)
                        )
                        / cubic(omega),
                        "scaling_residual": abs(
                            invariance.wien_scaling_check(planck_zp, omega, 1.0, lam)
                        ),
                    }
                )
        table = pd.DataFrame(rows)
        # phi(omega / T) tends to the zeropoint coefficient as T -> 0
        cold = invariance.wien_profile(planck_zp, 1.0, 1e-3 * k.hbar / k.k_b)
        checks = [
            CheckResult.within(
                "wien_adiabatic_cubic",
                invariance.__name__,
                float(table["adiabatic_relative"].max()),
                tol.wien_adiabatic,
            ),
            CheckResult.within(
                "wien_scaling_planck_zp",
                invariance.__name__,
                float(table["scaling_residual"].max()),
                tol.wien_scaling,
            ),
            CheckResult.within(
                "wien_profile_cold_limit",
                invariance.__name__,
                abs(cold - coefficient) / coefficient,
                1e-12,
            ),
        ]
        return table, checks

    @staticmethod
    def kinematics(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        frame = AcceleratedFrame(a=config.unruh.acceleration, constants=k)
        rows = []
        worst_round_trip = worst_doppler = 0.0
        for tau in np.linspace(0.0, 5.0 * k.c / frame.a, 51):
            point = kinematics.trajectory_proper(frame, float(tau))
            back = kinematics.trajectory_coordinate(frame, point.t)
            chirp = float(kinematics.doppler_chirp(frame, 1.0, tau))
            doppler = kinematics.instantaneous_doppler(frame, 1.0, float(tau))
            worst_round_trip = max(worst_round_trip, abs(back.tau - tau) / max(1.0, tau))
            worst_doppler = max(worst_doppler, abs(doppler - chirp) / chirp)
            rows.append(point.model_dump() | {"doppler": chirp})

        norms = [
            abs(kinematics.minkowski_norm(kinematics.boost_four_acceleration(frame, Boost(beta=b)))
                + frame.a**2) / frame.a**2
            for b in np.linspace(-0.95, 0.95, 11)
        ]
        checks = [
            CheckResult.within(
                "trajectory_round_trip", kinematics.__name__, worst_round_trip, tol.kinematics
            ),
            CheckResult.within(
                "doppler_chirp_matches_boost", kinematics.__name__, worst_doppler, tol.kinematics
            ),
            CheckResult.within(
                "four_acceleration_invariant", kinematics.__name__, max(norms), tol.kinematics
            ),
        ]
        return pd.DataFrame(rows), checks

    @staticmethod
    def fluctuations(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        omega = 1.0
        rows = []
        for x in np.geomspace(0.1, 10.0, 20):
            temperature = k.hbar * omega / (k.k_b * float(x))
            split = fluctuations.decompose_variance(omega, temperature, k)
            derivative = fluctuations.thermal_variance(omega, temperature, k)
            rows.append(
                {
                    "x": float(x),
                    "temperature": temperature,
                    "thermal": split.thermal,
                    "fluctuation": derivative,
                    "relative_error": abs(split.thermal - derivative) / derivative,
                    "additivity_gap": fluctuations.energy_additivity_gap(omega, temperature, k),
                }
            )
        table = pd.DataFrame(rows)

        dist = EnergyDistribution(mean_energy=1.0)
        samples = fluctuations.sample_energies(dist, N_ENERGY_SAMPLES, seed=config.seed)
        squares = samples**2
        sigma = squares.std(ddof=1) / math.sqrt(len(squares))
        z_score = abs(squares.mean() - fluctuations.second_moment(dist)) / sigma
        gaps = fluctuations.maxent_optimality_gaps(dist, k)
        checks = [
            CheckResult.within(
                "variance_decomposition",
                fluctuations.__name__,
                float(table["relative_error"].max()),
                tol.variance,
            ),
            CheckResult(
                name="energy_not_additive",
                module=fluctuations.__name__,
                passed=bool((table["additivity_gap"] < 0).all()),
                residual=float(table["additivity_gap"].max()),
                detail="<E> - (hbar omega / 2 + k_b T) must stay negative",
            ),
            CheckResult.within(
                "exponential_second_moment",
                fluctuations.__name__,
                z_score,
                tol.mc_sigma,
                detail="in standard errors",
            ),
            CheckResult(
                name="exponential_maximizes_entropy",
                module=fluctuations.__name__,
                passed=all(gap > 0 for gap in gaps.values()),
                residual=min(gaps.values()),
                detail=", ".join(f"{label}={gap:.4g}" for label, gap in gaps.items()),
            ),
        ]
        return table, checks

    @staticmethod
    def _unruh_checks(config, estimate, window, frame) -> list[CheckResult]:
        tol = config.tolerances
        module = zpf_unruh.__name__
        bin_error = np.abs(estimate.expected - estimate.theory_convolved) / estimate.theory_convolved
        lowest = int(np.argmin(estimate.omegas))
        separation = (
            abs(estimate.expected[lowest] - estimate.zeropoint_convolved[lowest])
            / estimate.zeropoint_convolved[lowest]
        )
        checks = [
            CheckResult.within(
                "unruh_expected_vs_convolved_theory", module, float(np.max(bin_error)), tol.unruh_bin
            ),
            CheckResult(
                name="unruh_departs_from_zeropoint",
                module=module,
                passed=separation > 5.0 * tol.unruh_bin,
                residual=separation,
                tolerance=5.0 * tol.unruh_bin,
                detail=f"relative excess over the zeropoint curve at Omega={estimate.omegas[lowest]:g}",
            ),
            CheckResult.within(
                "gamma_chain",
                module,
                max(zpf_unruh.gamma_chain_residual(frame, float(w)) for w in estimate.omegas),
                tol.gamma_identity,
            ),
        ]
        try:
            fit = zpf_unruh.fit_unruh_temperature(estimate, frame)
            checks.append(
                CheckResult.within(
                    "unruh_temperature", module, fit.relative_error, tol.unruh_temperature,
                    detail=f"T={fit.temperature:.6g} +/- {fit.stderr:.2g}, target {fit.target:.6g}",
                )
            )
            exact = SpectrumEstimate(
                omegas=estimate.omegas, expected=estimate.theory_convolved, window=window
            )
            sanity = zpf_unruh.fit_unruh_temperature(exact, frame)
            checks.append(
                CheckResult.within("unruh_fit_sanity", module, sanity.relative_error, tol.fit_sanity)
            )
        except ZpfError as e:
            logger.error(f"Temperature fit failed: {e}")
            checks.append(
                CheckResult(name="unruh_temperature", module=module, passed=False, detail=str(e))
            )
        return checks

    @staticmethod
    def unruh_expected(config: RunConfig, k: PhysicalConstants):
        estimate, window, frame = zpf_unruh.run_unruh_pipeline(
            config.unruh, config.seed, k, monte_carlo=False, n_jobs=config.n_jobs
        )
        return estimate, RunService._unruh_checks(config, estimate, window, frame)

    @staticmethod
    def unruh_mc(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        estimate, window, frame = zpf_unruh.run_unruh_pipeline(
            config.unruh, config.seed, k, monte_carlo=True, n_jobs=config.n_jobs
        )
        deviation = np.abs(estimate.mc_mean - estimate.expected) / estimate.mc_stderr
        coverage = float(np.mean(deviation <= tol.mc_sigma))

        omega_min, omega_max = config.unruh.mode_band(k.c)
        modes = zpf_unruh.build_modeset(omega_min, omega_max, config.unruh.delta_x, config.seed, k)
        mean, stderr = zpf_unruh.mc_field_variance(
            modes, 0.0, config.unruh.n_realizations, config.seed
        )
        variance_z = abs(mean - zpf_unruh.field_variance_theory(modes)) / stderr
        checks = [
            CheckResult(
                name="mc_matches_expected",
                module=zpf_unruh.__name__,
                passed=coverage >= tol.mc_coverage,
                residual=coverage,
                tolerance=tol.mc_coverage,
                detail=f"fraction of bins within {tol.mc_sigma:g} standard errors",
            ),
            CheckResult.within(
                "field_variance", zpf_unruh.__name__, variance_z, tol.mc_sigma,
                detail="in standard errors",
            ),
        ]
        return estimate, checks

    @staticmethod
    def gamma_check(config: RunConfig, k: PhysicalConstants):
        tol = config.tolerances
        module = gamma_integrals.__name__
        xs = np.geomspace(0.05, 10.0, 40)
        table = pd.DataFrame(
            {
                "x": xs,
                "residual": [gamma_integrals.gamma_imag_identity_residual(float(x)) for x in xs],
            }
        )
        checks = [
            CheckResult.within(
                "gamma_imaginary_identity", module, float(table["residual"].abs().max()),
                tol.gamma_identity,
            ),
            CheckResult.within(
                "gamma_recurrence",
                module,
                max(
                    gamma_integrals.gamma_recurrence_residual(z)
                    for z in (0.3 + 0.2j, -1.7 + 0.5j, 4.5 - 3.0j, 0.01j)
                ),
                1e-12,
            ),
        ]
        for p in REGULARIZED_PARAMETERS:
            closed_form = gamma_integrals.oscillatory_closed_form(p)
            value = gamma_integrals.regularized_oscillatory_integral(p)
            checks.append(
                CheckResult.within(
                    f"regularized_integral_p={p}",
                    module,
                    abs(value - closed_form) / abs(closed_form),
                    tol.regularized_integral,
                )
            )
        for a, epsilon in CONTOUR_CASES:
            legs = gamma_integrals.contour_decomposition(0.5 + 0.3j, a, epsilon)
            checks.append(
                CheckResult.within(
                    f"contour_closure_a={a:g}", module, legs.cauchy_residual, tol.contour
                )
            )
            checks.append(
                CheckResult(
                    name=f"contour_bounds_a={a:g}",
                    module=module,
                    passed=legs.bounds_hold,
                    detail=(
                        f"|I3|={abs(legs.I3):.3g}<={legs.bound_I3:.3g}, "
                        f"|I4|={abs(legs.I4):.3g}<={legs.bound_I4:.3g}, "
                        f"|I5|={abs(legs.I5):.3g}<={legs.bound_I5:.3g}"
                    ),
                )
            )
        return table, checks

    @staticmethod
    def all_checks(config: RunConfig, k: PhysicalConstants):
        checks = []
        for command, handler in HANDLERS.items():
            if command == "all-checks":
                continue
            logger.info(f"all-checks: running {command}")
            try:
                _, command_checks = handler(config, k)
            except ZpfError as e:
                logger.error(f"{command} failed: {e}")
                command_checks = [
                    CheckResult(name=command, module=e.module or __name__, passed=False, detail=str(e))
                ]
            checks.extend(command_checks)
        return None, checks

    @staticmethod
    def execute(config: RunConfig) -> RunReport:
        """Run a command, emit its output and return the report; never raises ZpfError."""
        started = time.perf_counter()
        report = RunReport(
            command=config.command,
            seed=config.seed,
            unit_system=config.unit_system,
            version=__version__,
            config=config.model_dump(mode="json"),
        )
        logger.info(f"Starting {config.command} (seed={config.seed}, units={config.unit_system})")
        try:
            k = config.physical_constants()
            result, checks = HANDLERS[config.command](config, k)
            report.checks = checks
            path = default_output_path(config)
            report.outputs.append(str(path))
            # a report emitted as the result carries its own timing
            report.wall_time_s = time.perf_counter() - started
            emit(report if result is None else result, config.format, path, run_metadata(config))
        except ZpfError as e:
            logger.error(f"{config.command} failed: {e}")
            report.error = str(e)
        except OSError as e:
            logger.error(f"I/O error for {e.filename}: {e}")
            report.error = f"I/O error on {e.filename}: {e.strerror}"
            report.outputs.clear()

        report.wall_time_s = time.perf_counter() - started
        for check in report.checks:
            level = logging.INFO if check.passed else logging.WARNING
            logger.log(level, f"{check.name}: {'pass' if check.passed else 'FAIL'} "
                       f"(residual={check.residual}, tolerance={check.tolerance})")
        logger.info(f"Finished {config.command} in {report.wall_time_s:.2f}s, exit {int(report.exit_code)}")
        return report


HANDLERS = {
    "spectra": RunService.spectra,
    "ode": RunService.ode,
    "invariance": RunService.invariance,
    "wien": RunService.wien,
    "kinematics": RunService.kinematics,
    "fluctuations": RunService.fluctuations,
    "unruh-expected": RunService.unruh_expected,
    "unruh-mc": RunService.unruh_mc,
    "gamma-check": RunService.gamma_check,
    "all-checks": RunService.all_checks,
}
