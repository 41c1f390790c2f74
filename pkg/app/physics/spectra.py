"""Spectral energy densities of the radiation field.

Every density carries the two polarization states of each mode:
rho(omega) = 2 * density_of_modes(omega) * <E>(omega).
"""

import logging
import math
import numpy as np
from scipy import integrate
from app.errors import DomainError
from app.models.constants import NATURAL, PhysicalConstants
from app.models.spectra import SpectralCurve, SpectralKind, ThermodynamicState
from app.physics.planck_classic import mean_energy_planck, mean_energy_with_zeropoint

logger = logging.getLogger(__name__)

POLARIZATIONS = 2


def density_of_modes(omega: float, constants: PhysicalConstants = NATURAL) -> float:
    """Modes per unit volume and angular frequency, one polarization."""
    if omega < 0:
        raise DomainError(f"omega must be >= 0, got {omega}", module=__name__)
    return omega**2 / (2.0 * math.pi**2 * constants.c**3)


def spectral_density(
    kind: SpectralKind | str,
    omega: float,
    state: ThermodynamicState | float,
    constants: PhysicalConstants = NATURAL,
) -> float:
    kind = SpectralKind(kind)
    temperature = state.temperature if isinstance(state, ThermodynamicState) else state
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}", module=__name__)
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0, got {temperature}", module=__name__)

    modes = POLARIZATIONS * density_of_modes(omega, constants)
    if kind is SpectralKind.RAYLEIGH_JEANS:
        if temperature == 0:
            raise DomainError("rayleigh_jeans needs T > 0", module=__name__)
        return modes * constants.k_b * temperature
    if kind is SpectralKind.ZEROPOINT:
        return modes * 0.5 * constants.hbar * omega
    if kind is SpectralKind.PLANCK:
        if temperature == 0:
            return 0.0
        return modes * mean_energy_planck(constants.hbar * omega, temperature, constants)
    if kind is SpectralKind.PLANCK_ZP:
        return modes * mean_energy_with_zeropoint(omega, temperature, constants)
    raise DomainError(f"{kind.value} is not a closed-form spectrum", module=__name__)


def thermal_excess(
    omega: float, temperature: float, constants: PhysicalConstants = NATURAL
) -> float:
    """planck_zp - zeropoint, i.e. the blackbody part alone."""
    return spectral_density(
        SpectralKind.PLANCK_ZP, omega, temperature, constants
    ) - spectral_density(SpectralKind.ZEROPOINT, omega, temperature, constants)


def spectral_curve(
    kind: SpectralKind | str,
    omegas,
    temperature: float,
    constants: PhysicalConstants = NATURAL,
) -> SpectralCurve:
    kind = SpectralKind(kind)
    values = [spectral_density(kind, float(w), temperature, constants) for w in omegas]
    return SpectralCurve(
        kind=kind,
        temperature=temperature,
        omegas=omegas,
        values=values,
        constants=constants,
    )


def power_spectrum_from_density(rho_value: float) -> float:
    """S = (2pi/3) rho."""
    if np.any(np.asarray(rho_value) < 0):
        raise DomainError("spectral density must be non-negative", module=__name__)
    return 2.0 * math.pi / 3.0 * rho_value


def cumulative_vacuum_energy(
    omega_cutoff: float, constants: PhysicalConstants = NATURAL
) -> float:
    """Zeropoint energy density below the cutoff: hbar w_c^4 / 8 pi^2 c^3.

    Grows as the fourth power of the cutoff, so the total vacuum energy diverges.
    """
    if not omega_cutoff > 0:
        raise DomainError(f"omega_cutoff must be positive, got {omega_cutoff}", module=__name__)
    return constants.hbar * omega_cutoff**4 / (8.0 * math.pi**2 * constants.c**3)


def vacuum_energy_quadrature(
    omega_cutoff: float, constants: PhysicalConstants = NATURAL
) -> float:
    """Adaptive quadrature of the zeropoint spectrum over [0, omega_cutoff]."""
    if not omega_cutoff > 0:
        raise DomainError(f"omega_cutoff must be positive, got {omega_cutoff}", module=__name__)

    def integrand(omega):
        if omega == 0:
            return 0.0
        return spectral_density(SpectralKind.ZEROPOINT, omega, 0.0, constants)

    value, abserr = integrate.quad(integrand, 0.0, omega_cutoff, epsabs=0.0, epsrel=1e-13)
    logger.debug(f"Vacuum energy quadrature to {omega_cutoff}: {value} +/- {abserr}")
    return value
