import pytest
from hypothesis import HealthCheck, settings

from _shared import ACCEPTANCE
from ranktwo.field import get_tower

settings.register_profile(
    "det",
    derandomize=True,
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("det")


@pytest.fixture(scope="session")
def t3():
    return get_tower(3, 1)


@pytest.fixture(scope="session")
def t5():
    return get_tower(5, 1)


@pytest.fixture(scope="session")
def t7():
    return get_tower(7, 1)


@pytest.fixture(scope="session")
def t9():
    return get_tower(3, 2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE:
        terminalreporter.write_sep("-", "acceptance criteria")
        for cid in sorted(ACCEPTANCE):
            terminalreporter.write_line(f"{cid}: {ACCEPTANCE[cid]}")
