import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bggtate.exterior import ExteriorContext
from bggtate.linalg import Field

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def GF():
    return Field(32003)


@pytest.fixture(params=[1, 2])
def ctx(request):
    return ExteriorContext(request.param, Field())


@pytest.fixture
def ctx1():
    return ExteriorContext(1, Field())


@pytest.fixture
def ctx2():
    return ExteriorContext(2, Field())


@pytest.fixture
def ctx3():
    return ExteriorContext(3, Field())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
