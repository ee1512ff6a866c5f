import pytest
from hypothesis import HealthCheck, settings

from hopelogic.scenarios import abp_model, two_bit_model

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def base():
    return two_bit_model()


@pytest.fixture
def abp():
    return abp_model()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
