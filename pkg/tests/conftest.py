import os

import numpy as np
import pytest

from app.services.linalg import BipartiteSplit
from app.services.qstate import make_density, maximally_mixed

STATES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "states")


@pytest.fixture
def rng():
    return np.random.default_rng(20240417)


@pytest.fixture
def states_dir():
    return STATES_DIR


@pytest.fixture
def qubit_mixed():
    return maximally_mixed(2)


@pytest.fixture
def ket_zero():
    return make_density(np.diag([1.0, 0.0]))


@pytest.fixture
def diag_three_quarters():
    return make_density(np.diag([0.75, 0.25]))


@pytest.fixture
def bell_state():
    psi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return make_density(np.outer(psi, psi.conj()), split=BipartiteSplit(dim_a=2, dim_b=2))


@pytest.fixture
def random_hermitian(rng):
    def build(dim: int) -> np.ndarray:
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return (x + x.conj().T) / 2
    return build
