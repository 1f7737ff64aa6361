from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent.parent / "data"

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on its own."""

    def record(number: int, passed: bool, detail: str):
        _CRITERIA[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_CRITERIA[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
