import pytest

from ktinhofer.config import get_config
from ktinhofer.graph import builtin


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def settings():
    """Settings as the environment (and .env) configure them."""
    return get_config()


@pytest.fixture
def c6():
    return builtin("cycle", [6])


@pytest.fixture
def frucht():
    return builtin("frucht")


SMALL_CIRCUIT = """\
gate 1 CONST0
gate 2 CONST1
gate 3 AND 1 2
output 3
"""


@pytest.fixture
def small_circuit_text():
    return SMALL_CIRCUIT
