import numpy as np
import pytest
from app.errors import DomainError
from app.physics.rng import random_phase_amplitudes, random_phases, realization_rng


def test_same_seed_and_realization_repeat():
    assert np.array_equal(random_phases(50, seed=7, realization=3), random_phases(50, 7, 3))


def test_realizations_are_distinct_streams():
    assert not np.allclose(random_phases(50, 7, 0), random_phases(50, 7, 1))
    assert not np.allclose(random_phases(50, 7, 1), random_phases(50, 6, 1))


def test_mode_phase_does_not_depend_on_mode_count():
    assert np.array_equal(random_phases(10, 1, 2), random_phases(100, 1, 2)[:10])


def test_amplitudes_have_modulus_one_over_root_two():
    alpha = random_phase_amplitudes(200, seed=0)
    assert np.allclose(np.abs(alpha), 1.0 / np.sqrt(2.0), rtol=1e-14)


def test_phases_lie_in_unit_circle_range():
    theta = random_phases(1000, seed=42)
    assert theta.min() >= 0.0 and theta.max() < 2.0 * np.pi


@pytest.mark.parametrize("seed", [-1, 1 << 64])
def test_seed_out_of_range(seed):
    with pytest.raises(DomainError):
        realization_rng(seed)


def test_largest_seed_accepted():
    realization_rng((1 << 64) - 1, index=5).random(3)
