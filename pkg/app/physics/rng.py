"""Counter-based random streams.

Realization ``i`` of seed ``s`` is the Philox stream keyed by ``(i << 64) | s``,
so any realization can be regenerated alone and the result of a run does not
depend on how realizations are spread over workers.
"""

import numpy as np
from app.errors import DomainError

_SEED_LIMIT = 1 << 64


def realization_rng(seed: int, index: int = 0) -> np.random.Generator:
    if not 0 <= seed < _SEED_LIMIT:
        raise DomainError(f"seed must lie in [0, 2**64), got {seed}", module=__name__)
    if not 0 <= index < _SEED_LIMIT:
        raise DomainError(f"stream index must be non-negative, got {index}", module=__name__)
    return np.random.Generator(np.random.Philox(key=(int(index) << 64) | int(seed)))


def random_phases(n_modes: int, seed: int, realization: int = 0) -> np.ndarray:
    """theta_n uniform on [0, 2pi); mode n takes the n-th draw of the stream."""
    return 2.0 * np.pi * realization_rng(seed, realization).random(n_modes)


def random_phase_amplitudes(n_modes: int, seed: int, realization: int = 0) -> np.ndarray:
    return np.exp(1j * random_phases(n_modes, seed, realization)) / np.sqrt(2.0)
