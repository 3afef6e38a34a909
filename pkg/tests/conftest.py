import pytest

from normtrace.field import build_context

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


@pytest.fixture(scope="session")
def f8():
    return build_context((2, 1, 3))


@pytest.fixture(scope="session")
def f64():
    return build_context((2, 1, 6))


@pytest.fixture(scope="session")
def f64_tower():
    return build_context((2, 2, 3))


@pytest.fixture(scope="session")
def f81():
    return build_context((3, 1, 4))


@pytest.fixture(scope="session")
def f2m15():
    return build_context((2, 1, 15))


@pytest.fixture(scope="session")
def f5m6():
    return build_context((5, 1, 6))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
