"""Planck's oscillator thermodynamics: entropy, mean energy, zeropoint."""

import logging
import math
from scipy.special import xlogy
from app.errors import DomainError
from app.models.constants import NATURAL, PhysicalConstants
from app.models.spectra import OscillatorState

logger = logging.getLogger(__name__)

# exp(x) overflows just above 709
_OVERFLOW_GUARD = 700.0


def _require_positive(name: str, value: float) -> None:
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value}", module=__name__)


def entropy_of_mean_energy(
    mean_energy: float, epsilon: float, constants: PhysicalConstants = NATURAL
) -> float:
    """S = k_b [(1 + u) ln(1 + u) - u ln u] with u = <E>/epsilon; S(0) = 0."""
    _require_positive("epsilon", epsilon)
    if mean_energy < 0 or not math.isfinite(mean_energy):
        raise DomainError(f"mean_energy must be >= 0, got {mean_energy}", module=__name__)
    u = mean_energy / epsilon
    return constants.k_b * float((1.0 + u) * math.log1p(u) - xlogy(u, u))


def mean_energy_planck(
    epsilon: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """<E> = epsilon / (exp(epsilon / k_b T) - 1)."""
    _require_positive("epsilon", epsilon)
    _require_positive("temperature", temperature)
    x = epsilon / (constants.k_b * temperature)
    if x > _OVERFLOW_GUARD:
        tail = math.exp(-x)
        return epsilon * tail / (1.0 - tail)
    return epsilon / math.expm1(x)


def mean_energy_with_zeropoint(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """hbar omega / 2 + Planck term; exactly hbar omega / 2 at T = 0."""
    _require_positive("omega", omega)
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}", module=__name__)
    epsilon = constants.hbar * omega
    zeropoint = 0.5 * epsilon
    if temperature == 0:
        return zeropoint
    return zeropoint + mean_energy_planck(epsilon, temperature, constants)


def high_temperature_deficit(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """Planck term minus k_b T; tends to -hbar omega / 2 as T grows."""
    epsilon = constants.hbar * omega
    return mean_energy_planck(epsilon, temperature, constants) - constants.k_b * temperature


def temperature_from_mean_energy(
    mean_energy: float, epsilon: float, constants: PhysicalConstants = NATURAL
) -> float:
    """Invert the Planck relation: 1/T = (k_b/epsilon) ln(epsilon/<E> + 1)."""
    _require_positive("mean_energy", mean_energy)
    _require_positive("epsilon", epsilon)
    return epsilon / (constants.k_b * math.log1p(epsilon / mean_energy))


def entropy_temperature(
    mean_energy: float, epsilon: float, constants: PhysicalConstants = NATURAL
) -> float:
    """Temperature from the analytic slope dS/d<E> = (k_b/epsilon) ln(1 + 1/u)."""
    _require_positive("mean_energy", mean_energy)
    _require_positive("epsilon", epsilon)
    slope = constants.k_b / epsilon * math.log1p(epsilon / mean_energy)
    return 1.0 / slope


def entropy_slope_fd(
    mean_energy: float,
    epsilon: float,
    constants: PhysicalConstants = NATURAL,
    fd_step: float = 1e-5,
) -> float:
    """Central difference of S in <E> with a relative step."""
    h = fd_step * mean_energy
    upper = entropy_of_mean_energy(mean_energy + h, epsilon, constants)
    lower = entropy_of_mean_energy(mean_energy - h, epsilon, constants)
    return (upper - lower) / (2.0 * h)


def oscillator_state(
    epsilon: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> OscillatorState:
    if temperature == 0:
        return OscillatorState(epsilon=epsilon, temperature=0.0, mean_energy=0.0, entropy=0.0)
    mean_energy = mean_energy_planck(epsilon, temperature, constants)
    if mean_energy == 0.0:
        logger.debug(f"Planck term underflowed at epsilon={epsilon}, T={temperature}")
    return OscillatorState(
        epsilon=epsilon,
        temperature=temperature,
        mean_energy=mean_energy,
        entropy=entropy_of_mean_energy(mean_energy, epsilon, constants),
    )
