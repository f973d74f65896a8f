import pytest

from specworld.scenario import build, load_scenario
from specworld.toylang import Lts, make_framework


def chain(*labels):
    """Linear LTS 0 -l1-> 1 -l2-> 2 ..."""
    states = tuple(range(len(labels) + 1))
    return Lts(states, 0, frozenset((i, a, i + 1) for i, a in enumerate(labels)))


@pytest.fixture(scope="session")
def toy():
    return make_framework()


@pytest.fixture(scope="session")
def gate():
    return build(load_scenario("gate"))


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[key])
