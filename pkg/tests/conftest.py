import numpy as np
import pytest

from labelbudget import TernaryDist


def random_ternary(rng, *, positive_mean=False, min_mass=1e-3):
    """Random valid ternary law; optionally force x > y (positive mean)."""
    while True:
        x, y, z = rng.dirichlet([1.0, 1.0, 1.0])
        if min(x, y, z) < min_mass:
            continue
        if positive_mean:
            x, y = max(x, y), min(x, y)
            if x == y:
                continue
        return TernaryDist(float(x), float(y), float(z))


@pytest.fixture
def rng():
    return np.random.default_rng(20240217)


@pytest.fixture
def dist_grid(rng):
    """20 random ternary laws for oracle-equivalence style checks."""
    return [random_ternary(rng) for _ in range(20)]


@pytest.fixture
def positive_dist_grid(rng):
    """20 random laws with strictly positive mean."""
    return [random_ternary(rng, positive_mean=True) for _ in range(20)]
