import numpy as np
import pytest

from sphere_poincare.grid import verification_grid


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def grid4():
    """Shared oversampled grid for band-4 data."""
    return verification_grid(4)


@pytest.fixture(scope="session")
def grid6():
    return verification_grid(6)
