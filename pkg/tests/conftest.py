import os

import pytest
from hypothesis import HealthCheck, settings

from qkquotient.report import THETA_1, THETA_2

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def theta1():
    return THETA_1


@pytest.fixture
def theta2():
    return THETA_2


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
