import pytest

from imgrowth import catalog


@pytest.fixture(scope="session")
def f1():
    return catalog.get("f1").presentation


@pytest.fixture(scope="session")
def f1_rule():
    return catalog.get("f1").rule
