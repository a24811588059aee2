import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

_AC_LINES = {}


@pytest.fixture
def acceptance():
    """``acceptance(number, ok, detail)`` records one summary line, then asserts ``ok``."""

    def record(number: int, ok: bool, detail: str):
        line = f"AC {number:2d} {'PASS' if ok else 'FAIL'}: {detail}"
        _AC_LINES[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _AC_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_AC_LINES):
            terminalreporter.write_line(_AC_LINES[number])
