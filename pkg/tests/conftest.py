import pytest

from spectile import make_group, pq_shape


@pytest.fixture(scope="session")
def z6():
    return make_group([2, 3])


@pytest.fixture(scope="session")
def z12():
    return make_group([2, 2, 3])


@pytest.fixture(scope="session")
def z36():
    return make_group([2, 2, 3, 3])


@pytest.fixture(scope="session")
def shape36(z36):
    return pq_shape(z36)
