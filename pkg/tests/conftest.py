import numpy as np
import pytest

from cpamac import by_name


@pytest.fixture(scope="session")
def bpsk():
    return by_name("bpsk")


@pytest.fixture(scope="session")
def qpsk():
    return by_name("qpsk")


@pytest.fixture(scope="session")
def psk8():
    return by_name("8psk")


@pytest.fixture(scope="session")
def qam16():
    return by_name("16qam")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
