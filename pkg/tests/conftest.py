import pytest

from robincheck.primes import build_table


@pytest.fixture(scope="session")
def table():
    """Shared prime table covering every range the suite needs."""
    return build_table(4_000_000)


@pytest.fixture(scope="session")
def table_small():
    return build_table(10_000)
