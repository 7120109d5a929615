import numpy as np
import pytest

from resonhhl.fixtures import load_fixture
from resonhhl.physics_alpha import ChannelSpec, RadialBasis


@pytest.fixture(scope="session")
def fx():
    return load_fixture()


@pytest.fixture(scope="session")
def basis():
    return RadialBasis()


@pytest.fixture(scope="session")
def channel():
    return ChannelSpec()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in RESULTS:
            terminalreporter.write_line(r.line())
