import pytest
from hypothesis import HealthCheck, settings

from copsym.quadrature import QuadratureConfig
from tests.helpers import ACCEPTANCE, named_copulas

settings.register_profile("copsym", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("copsym")


@pytest.fixture(scope="session")
def zoo():
    return named_copulas()


@pytest.fixture(scope="session")
def cfg():
    return QuadratureConfig(n=512, refine_levels=1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
