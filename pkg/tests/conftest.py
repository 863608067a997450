from __future__ import annotations

import pytest

from zetagaps.primesums import sieve
from zetagaps.zeros import isolate_zeros


@pytest.fixture(scope="session")
def zl_1000():
    return isolate_zeros(10.0, 1000.0)


@pytest.fixture(scope="session")
def zl_1e4():
    return isolate_zeros(10.0, 10001.0)


@pytest.fixture(scope="session")
def zl_2e4():
    return isolate_zeros(10.0, 20002.0)


@pytest.fixture(scope="session")
def table_1e6():
    return sieve(10 ** 6)


@pytest.fixture(scope="session")
def table_1e7():
    return sieve(10 ** 7)
