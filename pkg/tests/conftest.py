import numpy as np
import pytest

from flexscat import far_field_matrix, make_shape

KAPPA = 2.0 * np.pi


@pytest.fixture(scope="session")
def disk():
    return make_shape("circle", radius=0.4)


@pytest.fixture(scope="session")
def disk_farfield(disk):
    """Reference discrete far-field operator: disk r=0.4, kappa=2pi, N=64, M=128."""
    return far_field_matrix(disk, KAPPA, 64, 128)
