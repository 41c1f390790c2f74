"""Hyperbolic motion at constant proper acceleration and the Doppler chirp it induces."""

import logging
import math
import numpy as np
from app.errors import DomainError
from app.models.relativity import AcceleratedFrame, Boost, TrajectoryPoint

logger = logging.getLogger(__name__)

# largest |a tau / c| accepted; cosh overflows long after but nothing needs more
RAPIDITY_LIMIT = 30.0


def _rapidity(frame: AcceleratedFrame, tau):
    rapidity = frame.chirp_rate * np.asarray(tau, dtype=float)
    if np.any(np.abs(rapidity) > RAPIDITY_LIMIT):
        raise DomainError(
            f"|a tau / c| exceeds {RAPIDITY_LIMIT}; proper time out of range",
            module=__name__,
        )
    return rapidity


def trajectory_coordinate(frame: AcceleratedFrame, t: float) -> TrajectoryPoint:
    """Worldline at coordinate time t for a detector starting at rest at the origin."""
    c = frame.constants.c
    s = frame.a * t / c
    root = math.hypot(1.0, s)
    return TrajectoryPoint(
        tau=c / frame.a * math.asinh(s),
        t=t,
        x=c**2 / frame.a * (root - 1.0),
        velocity=frame.a * t / root,
        gamma=root,
    )


def trajectory_proper(frame: AcceleratedFrame, tau: float) -> TrajectoryPoint:
    c = frame.constants.c
    rapidity = float(_rapidity(frame, tau))
    return TrajectoryPoint(
        tau=tau,
        t=c / frame.a * math.sinh(rapidity),
        # cosh - 1 = 2 sinh^2(r/2) keeps small-tau positions accurate
        x=c**2 / frame.a * 2.0 * math.sinh(0.5 * rapidity) ** 2,
        velocity=c * math.tanh(rapidity),
        gamma=math.cosh(rapidity),
    )


def proper_time_rate(frame: AcceleratedFrame, t: float) -> float:
    """d tau / d t = sqrt(1 - v^2 / c^2)."""
    point = trajectory_coordinate(frame, t)
    return 1.0 / point.gamma


def boost_four_acceleration(frame: AcceleratedFrame, boost: Boost) -> np.ndarray:
    """(beta gamma a, gamma a, 0, 0): the rest-frame (0, a, 0, 0) seen after a boost."""
    return np.array(
        [boost.beta * boost.gamma * frame.a, boost.gamma * frame.a, 0.0, 0.0]
    )


def minkowski_norm(four_vector) -> float:
    """u^0 u^0 - |u|^2 with signature (+, -, -, -)."""
    u = np.asarray(four_vector, dtype=float)
    return float(u[0] ** 2 - np.dot(u[1:], u[1:]))


def doppler_chirp(
    frame: AcceleratedFrame, omega: float, tau, copropagating: bool = True
):
    """omega e^(-a tau / c) for a co-propagating wave, omega e^(+a tau / c) otherwise."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}", module=__name__)
    rapidity = _rapidity(frame, tau)
    sign = -1.0 if copropagating else 1.0
    return omega * np.exp(sign * rapidity)


def instantaneous_doppler(
    frame: AcceleratedFrame, omega: float, tau: float, copropagating: bool = True
) -> float:
    """gamma(tau) omega (1 - k v(tau) / omega) with k = +-omega / c."""
    point = trajectory_proper(frame, tau)
    k = omega / frame.constants.c if copropagating else -omega / frame.constants.c
    return point.gamma * omega * (1.0 - k * point.velocity / omega)


def chirp_phase(frame: AcceleratedFrame, omega: float, tau):
    """phi(tau) = (omega c / a) e^(-a tau / c), whose rate is minus the chirp."""
    rapidity = _rapidity(frame, tau)
    return omega / frame.chirp_rate * np.exp(-rapidity)
