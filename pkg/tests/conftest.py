import pytest
from hypothesis import settings

# first calls pay numba compilation; wall-clock deadlines would be noise
settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

_RESULTS = {}


@pytest.fixture
def record():
    """``record(key, ok, detail)`` stores one summary line for the terminal report."""
    def _rec(key, ok, detail=""):
        _RESULTS[key] = (bool(ok), detail)
    return _rec


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: (len(k), k)):
        ok, detail = _RESULTS[key]
        tr.write_line(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
