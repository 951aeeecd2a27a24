import pytest

_LINES = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the assertion still decides the outcome."""

    def record(number, ok, detail):
        _LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
