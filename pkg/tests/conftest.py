import pytest

from morsebranch.complex import build_x_gamma
from morsebranch.graph import build_gamma
from morsebranch.morse import Truncation, level_graph


@pytest.fixture(scope="session")
def gamma():
    return build_gamma()


@pytest.fixture(scope="session")
def X(gamma):
    return build_x_gamma(gamma)


@pytest.fixture(scope="session")
def Z3():
    return Truncation(3)


@pytest.fixture(scope="session")
def Z4():
    return Truncation(4)


@pytest.fixture(scope="session")
def Z0(Z4):
    return level_graph(Z4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
