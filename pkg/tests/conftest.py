import numpy as np
import pytest

from config.settings import DEFAULT_TOLERANCES, RunConfig
from core.sampling import make_rng


@pytest.fixture
def rng():
    return make_rng(2024)


@pytest.fixture
def tolerances():
    return DEFAULT_TOLERANCES


@pytest.fixture
def config():
    return RunConfig(n_verify=20)


@pytest.fixture
def hadamard():
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
