import numpy as np
import pytest


class PinnedNormalRng:
    """Stand-in generator whose ``normal`` calls return queued constants."""

    def __init__(self, *values):
        self.values = list(values)

    def normal(self, loc=0.0, scale=1.0, size=None):
        v = self.values.pop(0) if len(self.values) > 1 else self.values[0]
        return float(v) if size is None else np.full(size, float(v))


@pytest.fixture
def pinned_rng():
    return PinnedNormalRng


# one line per acceptance criterion, printed after the test session
CRITERIA: dict[int, tuple[bool, str, str]] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    CRITERIA[number] = (bool(ok), title, detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, title, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
