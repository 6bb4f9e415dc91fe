import pytest
from hypothesis import settings

from rnsdiv.core import mod9_default_format, mod9_power_format, toy_format

settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.register_profile("quick", max_examples=50, deadline=None)

# Filled by test_acceptance; echoed after the run so it lands in the log.
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def fmt9():
    return mod9_default_format()


@pytest.fixture(scope="session")
def fmt8():
    return mod9_power_format()


@pytest.fixture(scope="session")
def toy():
    return toy_format()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
