import numpy as np
import pytest

from ringsim import FrequencyGrid, RingParams, build_ring, sweep


@pytest.fixture(scope="session")
def ring_params_06():
    """Lossless balanced ring, 0.6 m circumference, ideal pi gyrator."""
    return RingParams(branch_electrical_length=0.3, gyrator_mode="ideal")


@pytest.fixture(scope="session")
def hardware_grid():
    return FrequencyGrid(7e9, 12.4e9, 5501)


@pytest.fixture(scope="session")
def lossless_spectrum(ring_params_06, hardware_grid):
    return sweep(build_ring(ring_params_06), hardware_grid)


@pytest.fixture(scope="session")
def experiment_params():
    """Ring matched to the hardware device: 0.8771 m circumference, cable loss on."""
    return RingParams(branch_electrical_length=0.43855, gyrator_mode="ideal",
                      uniform_loss_on=True)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240901)
