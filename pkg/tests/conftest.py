from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from conformal_ladder.fock_ladder import build_basis

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def basis4():
    return build_basis(4)


@pytest.fixture(scope="session")
def basis5():
    return build_basis(5)


@pytest.fixture(scope="session")
def basis8():
    return build_basis(8)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
