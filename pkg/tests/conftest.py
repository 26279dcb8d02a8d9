import numpy as np
import pytest

from helpers import settings
from modules.gamma import load_context
from modules.scalars import make_field


@pytest.fixture(scope="module")
def f2():
    return make_field(2)


@pytest.fixture(scope="module")
def f3():
    return make_field(3)


@pytest.fixture(scope="module")
def f4():
    return make_field(2, 2)


@pytest.fixture(scope="module")
def q8():
    return load_context("Q8", "2")


@pytest.fixture(scope="module")
def q8_ring(q8):
    return q8.ring


@pytest.fixture(scope="module")
def q8_f2(q8):
    return q8.f2()


@pytest.fixture(scope="module")
def c2():
    return load_context("C2", "2")


@pytest.fixture(scope="module")
def c3():
    return load_context("C3", "3")


@pytest.fixture(scope="module")
def c4():
    return load_context("C4", "2")


@pytest.fixture(scope="module")
def c2c2():
    return load_context("C2xC2", "2")


@pytest.fixture(scope="module")
def c3c3():
    return load_context("C3xC3", "3")


@pytest.fixture(scope="module")
def c2c2c2():
    return load_context("C2xC2xC2", "2")


@pytest.fixture(scope="module")
def c4c4c4():
    return load_context("C4xC4xC4", "2")


@pytest.fixture
def rng():
    return np.random.default_rng(settings.SEED)
