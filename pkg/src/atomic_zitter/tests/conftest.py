import math

import pytest

from atomic_zitter.core import DimensionlessParams, GaussianSpec, make_k_grid


@pytest.fixture
def grid():
    return make_k_grid()


@pytest.fixture
def small_grid():
    return make_k_grid(-4.0, 4.0, 1024)


@pytest.fixture
def unit_params():
    return DimensionlessParams(v_z=1.0, c_theta=1.0)


@pytest.fixture
def equal_spec():
    """(1, 1)/sqrt(2) packet at rest."""
    return GaussianSpec.superposition(0.0, 0.05)


@pytest.fixture
def phase_spec():
    return GaussianSpec.superposition(1.0, 0.05, math.pi / 4)
