import dataclasses

import numpy as np
import pytest

from lhvapor import CODATA2018
from lhvapor.cli import DEFAULT_ATOM, DEFAULT_DRIVE


@pytest.fixture
def atom():
    return DEFAULT_ATOM


@pytest.fixture
def drive():
    return dataclasses.replace(DEFAULT_DRIVE, delta_p=0.0)


@pytest.fixture
def consts():
    return CODATA2018


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian_unit_trace(rng, n=4):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    return h / np.trace(h).real
