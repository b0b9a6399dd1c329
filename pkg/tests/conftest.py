import pytest

from orbitsieve import arith


@pytest.fixture(scope="session")
def table_1e4():
    return arith.sieve(10**4)


@pytest.fixture(scope="session")
def table_1e6():
    return arith.sieve(10**6)
