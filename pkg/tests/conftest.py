from __future__ import annotations

import pytest

from dp5cover.bdfile import load_bundled


@pytest.fixture(scope="session")
def bd1():
    return load_bundled("construction1")


@pytest.fixture(scope="session")
def bd2():
    return load_bundled("construction2")


@pytest.fixture(scope="session", params=["construction1", "construction2"])
def bundled(request):
    return load_bundled(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
