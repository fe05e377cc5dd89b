import numpy as np
import pytest

from siegeldisk import cayley_gamma, omega, pauli_lifted


@pytest.fixture
def sx():
    return pauli_lifted("x", 1)


@pytest.fixture
def sz():
    return pauli_lifted("z", 1)


def norm(m):
    return float(np.linalg.norm(np.asarray(m), 2))


@pytest.fixture
def gamma1():
    return cayley_gamma(1)


@pytest.fixture
def omega1():
    return omega(1)
