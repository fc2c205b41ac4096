import pytest

_LINES = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""
    def add(number, name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        _LINES.append(f"[{status}] criterion {number:>2}: {name}" + (f" ({detail})" if detail else ""))
        return passed
    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
