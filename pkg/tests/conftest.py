import numpy as np
import pytest

from phonodiff.material import VelocityGrid, multi_bin, single_bin


@pytest.fixture(scope="session")
def vgrid():
    return VelocityGrid.gauss(32)


@pytest.fixture(scope="session")
def unit_material():
    """Single bin with Kn = 1."""
    return single_bin(kn=1.0)


@pytest.fixture(scope="session")
def thick_material():
    """Single bin with Kn = 1/16."""
    return single_bin(kn=1.0 / 16.0)


@pytest.fixture(scope="session")
def six_bin_material():
    return multi_bin(length=16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def phi_v(v, w):
    return v * np.ones_like(w)


def phi_v2(v, w):
    return v**2 * np.ones_like(w)
