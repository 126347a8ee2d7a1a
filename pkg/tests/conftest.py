import os

import pytest
from hypothesis import HealthCheck, settings

from hyperfront.gas_core import SimilarityParams

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GAMMA = 1.4
A_INF = 0.5

# filled by test_acceptance.py; echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(params=[0.0, 0.1], ids=["tau0", "tau0.1"])
def params(request):
    return SimilarityParams(GAMMA, A_INF, request.param)


@pytest.fixture
def p0():
    return SimilarityParams(GAMMA, A_INF, 0.0)


@pytest.fixture
def p1():
    return SimilarityParams(GAMMA, A_INF, 0.1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
