import numpy as np
import pytest


def ginibre(rng, m):
    return (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def jordan_swap():
    # |T| = diag(2, 1), U = [[0, 1], [1, 0]]
    return np.array([[0.0, 1.0], [2.0, 0.0]], dtype=complex)
