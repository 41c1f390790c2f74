"""Energy fluctuations of a field mode and the equation they impose on the spectrum."""

import logging
import math
import numpy as np
from scipy import integrate, stats
from scipy.special import entr
from app.errors import DomainError, StepSizeError
from app.models.constants import NATURAL, PhysicalConstants
from app.models.fluctuations import EnergyDistribution, VarianceDecomposition
from app.models.spectra import SpectrumTrajectory
from app.physics.planck_classic import mean_energy_with_zeropoint
from app.physics.rng import realization_rng

logger = logging.getLogger(__name__)

# lower end of the ODE's temperature range, in units of hbar omega / k_b
SINGULAR_MARGIN = 0.05
LOCAL_ERROR_LIMIT = 1e-4
# RK4 steps per output interval
SUBSTEPS = 4


def maxent_density(dist: EnergyDistribution, energy: float) -> float:
    if energy < 0:
        raise DomainError(f"energy must be >= 0, got {energy}", module=__name__)
    return math.exp(-energy / dist.mean_energy) / dist.mean_energy


def sample_energies(
    dist: EnergyDistribution, n: int, seed: int = 0, stream: int = 0
) -> np.ndarray:
    """Inverse-transform draws E = -<E> ln(1 - U) from the (seed, stream) generator."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}", module=__name__)
    uniforms = realization_rng(seed, stream).random(n)
    return -dist.mean_energy * np.log1p(-uniforms)


def second_moment(dist: EnergyDistribution) -> float:
    """<E^2> = 2 <E>^2 for the exponential law."""
    return 2.0 * dist.mean_energy**2


def moment_quadrature(dist: EnergyDistribution, order: int) -> float:
    value, _ = integrate.quad(
        lambda e: e**order * maxent_density(dist, e),
        0.0,
        np.inf,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return value


def entropy_functional(pdf, constants: PhysicalConstants = NATURAL, upper=np.inf) -> float:
    """-k_b * integral of P ln P over [0, upper)."""
    value, _ = integrate.quad(lambda e: entr(pdf(e)), 0.0, upper, limit=200)
    return constants.k_b * value


def maxent_optimality_gaps(
    dist: EnergyDistribution, constants: PhysicalConstants = NATURAL
) -> dict[str, float]:
    """Entropy of the exponential law minus that of same-mean alternatives.

    Every gap is positive when the exponential maximizes the entropy at fixed mean.
    """
    m = dist.mean_energy
    alternatives = {
        "gamma_shape_2": stats.gamma(a=2.0, scale=m / 2.0),
        "gamma_shape_0.5": stats.gamma(a=0.5, scale=2.0 * m),
        "half_normal": stats.halfnorm(scale=m * math.sqrt(math.pi / 2.0)),
        "uniform": stats.uniform(loc=0.0, scale=2.0 * m),
    }
    reference = float(stats.expon(scale=m).entropy())
    return {
        label: constants.k_b * (reference - float(law.entropy()))
        for label, law in alternatives.items()
    }


def thermal_variance(
    omega: float,
    temperature: float,
    constants: PhysicalConstants = NATURAL,
    fd_step: float = 1e-4,
) -> float:
    """k_b T^2 d<E>/dT, central difference with relative step fd_step."""
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature}", module=__name__)
    h = fd_step * temperature
    upper = mean_energy_with_zeropoint(omega, temperature + h, constants)
    lower = mean_energy_with_zeropoint(omega, temperature - h, constants)
    return constants.k_b * temperature**2 * (upper - lower) / (2.0 * h)


def thermal_variance_exact(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """(hbar omega)^2 e^x / (e^x - 1)^2 with x = hbar omega / k_b T."""
    epsilon = constants.hbar * omega
    x = epsilon / (constants.k_b * temperature)
    # e^x/(e^x-1)^2 = 1/(4 sinh^2(x/2))
    return epsilon**2 / (4.0 * math.sinh(0.5 * x) ** 2)


def decompose_variance(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> VarianceDecomposition:
    mean_energy = mean_energy_with_zeropoint(omega, temperature, constants)
    zeropoint = (0.5 * constants.hbar * omega) ** 2
    total = mean_energy**2
    return VarianceDecomposition(
        omega=omega,
        temperature=temperature,
        total=total,
        zeropoint=zeropoint,
        thermal=total - zeropoint,
    )


def energy_additivity_gap(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """<E> - (hbar omega / 2 + k_b T); strictly negative at any finite temperature."""
    mean_energy = mean_energy_with_zeropoint(omega, temperature, constants)
    return mean_energy - (0.5 * constants.hbar * omega + constants.k_b * temperature)


def zeropoint_density(omega: float, constants: PhysicalConstants = NATURAL) -> float:
    return constants.hbar * omega**3 / (2.0 * math.pi**2 * constants.c**3)


def spectrum_ode_rhs(
    rho: float,
    omega: float,
    temperature: float,
    constants: PhysicalConstants = NATURAL,
    include_zeropoint: bool = True,
) -> float:
    """d rho / dT = (pi^2 c^3 / omega^2 k_b T^2) [rho^2 - rho_zp^2]."""
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature}", module=__name__)
    coefficient = math.pi**2 * constants.c**3 / (omega**2 * constants.k_b * temperature**2)
    floor = zeropoint_density(omega, constants) if include_zeropoint else 0.0
    return coefficient * (rho * rho - floor * floor)


def general_ode_solution(
    omega: float,
    temperature,
    t_ref: float,
    rho_ref: float,
    constants: PhysicalConstants = NATURAL,
    include_zeropoint: bool = True,
):
    """Separation-of-variables solution through (t_ref, rho_ref).

    With the zeropoint: rho = rho_zp coth(hbar omega / 2 k_b T + C); the
    physical branch is C = 0. Without it: 1/rho = A/T - A/t_ref + 1/rho_ref
    with A = pi^2 c^3 / omega^2 k_b, and the Rayleigh-Jeans law is the
    member with 1/rho_ref = A/t_ref.

    A reference point on the physical branch (relative 1e-12) returns the
    planck_zp density itself, without going through atanh.
    """
    temperature = np.asarray(temperature, dtype=float)
    if include_zeropoint:
        floor = zeropoint_density(omega, constants)
        scale = constants.hbar * omega / (2.0 * constants.k_b)
        physical = floor / math.tanh(scale / t_ref)
        if abs(rho_ref - physical) <= 1e-12 * physical:
            return floor / np.tanh(scale / temperature)
        shift = math.atanh(floor / rho_ref) - scale / t_ref
        return floor / np.tanh(scale / temperature + shift)
    a_coeff = math.pi**2 * constants.c**3 / (omega**2 * constants.k_b)
    return 1.0 / (a_coeff / temperature - a_coeff / t_ref + 1.0 / rho_ref)


def _rk4_step(rhs, t: float, rho: float, h: float) -> float:
    k1 = rhs(rho, t)
    k2 = rhs(rho + 0.5 * h * k1, t + 0.5 * h)
    k3 = rhs(rho + 0.5 * h * k2, t + 0.5 * h)
    k4 = rhs(rho + h * k3, t + h)
    return rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def solve_spectrum_ode(
    omega: float,
    t_start: float,
    t_end: float,
    rho_start: float,
    steps: int = 2000,
    constants: PhysicalConstants = NATURAL,
    include_zeropoint: bool = True,
    substeps: int = SUBSTEPS,
) -> SpectrumTrajectory:
    """Fixed-step classical Runge-Kutta on a uniform temperature grid.

    The output holds steps + 1 grid points; each output interval is covered
    by `substeps` RK4 steps. Each RK4 step is compared against two half
    steps; a relative discrepancy above LOCAL_ERROR_LIMIT aborts with
    StepSizeError.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}", module=__name__)
    if steps < 1 or substeps < 1:
        raise DomainError(
            f"steps and substeps must be >= 1, got {steps}, {substeps}", module=__name__
        )
    t_low = min(t_start, t_end)
    if include_zeropoint:
        t_floor = SINGULAR_MARGIN * constants.hbar * omega / constants.k_b
        if t_low < t_floor:
            raise DomainError(
                f"temperature {t_low} is below the singular margin {t_floor}",
                module=__name__,
            )
    elif not t_low > 0:
        raise DomainError("temperatures must be positive", module=__name__)

    temperatures = np.linspace(t_start, t_end, steps + 1)
    floor = zeropoint_density(omega, constants) if include_zeropoint else 0.0

    if include_zeropoint and abs(rho_start - floor) <= 1e-14 * floor:
        logger.info(f"Start on the zeropoint fixed point at omega={omega}; solution is constant")
        values = np.full_like(temperatures, floor)
        return SpectrumTrajectory(
            omega=omega, temperatures=temperatures, values=values, closed_form=values
        )
    if rho_start <= floor:
        raise DomainError(
            f"rho_start={rho_start} must exceed the zeropoint density {floor}",
            module=__name__,
        )

    def rhs(rho, t):
        return spectrum_ode_rhs(rho, omega, t, constants, include_zeropoint)

    h = (t_end - t_start) / (steps * substeps)
    values = np.empty_like(temperatures)
    values[0] = rho_start
    worst = 0.0
    for i in range(steps):
        rho = values[i]
        for j in range(substeps):
            t = temperatures[i] + j * h
            full = _rk4_step(rhs, t, rho, h)
            half = _rk4_step(rhs, t, rho, 0.5 * h)
            doubled = _rk4_step(rhs, t + 0.5 * h, half, 0.5 * h)
            local_error = abs(doubled - full) / (15.0 * abs(doubled))
            worst = max(worst, local_error)
            if local_error > LOCAL_ERROR_LIMIT:
                raise StepSizeError(
                    f"local error {local_error:.3e} at T={t:.6g} exceeds {LOCAL_ERROR_LIMIT}",
                    module=__name__,
                )
            rho = full
        values[i + 1] = rho

    logger.debug(
        f"RK4 over {steps}x{substeps} steps, worst local error estimate {worst:.3e}"
    )
    closed_form = general_ode_solution(
        omega, temperatures, t_start, rho_start, constants, include_zeropoint
    )
    return SpectrumTrajectory(
        omega=omega,
        include_zeropoint=include_zeropoint,
        temperatures=temperatures,
        values=values,
        closed_form=closed_form,
    )
