"""Lorentz and Wien (adiabatic) invariance of candidate vacuum spectra."""

import logging
import math
from typing import Callable
from app.errors import DomainError
from app.models.constants import NATURAL, PhysicalConstants
from app.models.relativity import Boost, SpectrumModel, WaveVector4
from app.models.spectra import SpectralKind
from app.physics.spectra import spectral_density

logger = logging.getLogger(__name__)


def boost_wavevector(
    w: WaveVector4, boost: Boost, constants: PhysicalConstants = NATURAL
) -> WaveVector4:
    """(omega, k) seen from a frame moving with beta*c along +x."""
    v = boost.beta * constants.c
    gamma = boost.gamma
    return WaveVector4(
        omega=gamma * (w.omega - v * w.kx),
        kx=gamma * (w.kx - v * w.omega / constants.c**2),
        ky=w.ky,
        kz=w.kz,
    )


def compose_boosts(first: Boost, second: Boost) -> Boost:
    """Collinear velocity addition."""
    return Boost(beta=(first.beta + second.beta) / (1.0 + first.beta * second.beta))


def lorentz_residual(
    model: SpectrumModel,
    boost: Boost,
    w: WaveVector4,
    constants: PhysicalConstants = NATURAL,
) -> float:
    """f(D omega) - D f(omega) with D = gamma (1 - v kx / omega).

    Normalized by f(omega) when that is positive; zero for f = alpha * omega.
    """
    if not w.is_light_like(constants):
        raise DomainError("lorentz_residual needs a light-like wave vector", module=__name__)
    factor = boost.gamma * (1.0 - boost.beta * constants.c * w.kx / w.omega)
    reference = model(w.omega)
    raw = model(factor * w.omega) - reference * factor
    if reference > 0:
        return raw / reference
    return raw


def linear_model(alpha: float, label: str | None = None) -> SpectrumModel:
    return SpectrumModel(label=label or f"linear({alpha:g})", f=lambda omega: alpha * omega)


def canonical_models(constants: PhysicalConstants = NATURAL) -> list[SpectrumModel]:
    """Classical vacuum, zeropoint (alpha = hbar / 2 pi^2) and a quadratic counterexample."""
    return [
        SpectrumModel(label="classical_vacuum", f=lambda omega: 0.0),
        linear_model(constants.hbar / (2.0 * math.pi**2), label="zeropoint"),
        SpectrumModel(label="quadratic", f=lambda omega: omega**2),
    ]


def _central_derivative(rho: Callable[[float], float], omega: float, fd_step: float) -> float:
    h = fd_step * omega
    return (rho(omega + h) - rho(omega - h)) / (2.0 * h)


def wien_adiabatic_delta(
    rho: Callable[[float], float],
    omega: float,
    dV_over_V: float,
    fd_step: float = 1e-5,
) -> float:
    """[(omega/3) rho'(omega) - rho(omega)] dV/V; zero for rho = a omega^3."""
    if not omega > 0 or not fd_step > 0:
        raise DomainError("omega and fd_step must be positive", module=__name__)
    derivative = _central_derivative(rho, omega, fd_step)
    return (omega / 3.0 * derivative - rho(omega)) * dV_over_V


def wien_scaling_check(
    rho: Callable[[float, float], float],
    omega: float,
    temperature: float,
    lam: float,
) -> float:
    """rho(lam w, lam T)/(lam w)^3 - rho(w, T)/w^3, relative to the second term."""
    if not (omega > 0 and temperature > 0 and lam > 0):
        raise DomainError("omega, temperature and lambda must be positive", module=__name__)
    reference = rho(omega, temperature) / omega**3
    scaled = rho(lam * omega, lam * temperature) / (lam * omega) ** 3
    return (scaled - reference) / reference


def wien_profile(
    rho: Callable[[float, float], float], omega: float, temperature: float
) -> float:
    """phi(omega / T) = rho(omega, T) / omega^3."""
    return rho(omega, temperature) / omega**3


def planck_zp_density(constants: PhysicalConstants = NATURAL) -> Callable[[float, float], float]:
    return lambda omega, temperature: spectral_density(
        SpectralKind.PLANCK_ZP, omega, temperature, constants
    )


def rayleigh_jeans_density(
    constants: PhysicalConstants = NATURAL,
) -> Callable[[float, float], float]:
    return lambda omega, temperature: spectral_density(
        SpectralKind.RAYLEIGH_JEANS, omega, temperature, constants
    )
