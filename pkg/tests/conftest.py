import numpy as np
import pytest

from specbarron import RandomSpec, WeylSystem, gamma_euclid, make_group, random_operator


@pytest.fixture
def system2():
    return WeylSystem(make_group([2]))


@pytest.fixture
def system4():
    return WeylSystem(make_group([4]))


def gaussian(factors, seed, target=None):
    """Shared seeded draw used across the test modules."""
    return random_operator(
        RandomSpec(seed=seed, factors=tuple(factors), target_b0_norm=target)
    )


def euclid(system):
    return gamma_euclid(system.group)


def max_abs(arr) -> float:
    return float(np.max(np.abs(arr)))
