import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"

# criterion number -> (passed, detail), filled by the acceptance tests
_CRITERIA = {}
_ACCEPTANCE_COUNT = 9


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion and return it."""
    def record(number, passed, detail):
        _CRITERIA[number] = (bool(passed), detail)
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in range(1, _ACCEPTANCE_COUNT + 1):
        if k not in _CRITERIA:
            terminalreporter.write_line(f"criterion {k}: NOT RUN")
            continue
        passed, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")
