import pytest

from levydecay import LevyModel, ProfileSpec

_LINES = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""
    def add(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _LINES.append(line)
        print(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cauchy():
    return LevyModel(1, ProfileSpec.pure_stable(1.0))


@pytest.fixture(scope="session")
def stable15():
    return LevyModel(1, ProfileSpec.pure_stable(1.5))


@pytest.fixture(scope="session")
def rel():
    return LevyModel(1, ProfileSpec.relativistic(1.0, 1.0))
