import contextlib
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]

# (name, passed) pairs collected by the `criterion` fixture; the terminal
# summary prints one line per entry so the acceptance run is auditable even
# with output capture on.
RESULTS: list[tuple[str, bool]] = []


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def record(name: str):
        try:
            yield
        except BaseException:
            RESULTS.append((name, False))
            raise
        RESULTS.append((name, True))

    return record


@pytest.fixture
def repo_root() -> Path:
    return REPO_ROOT


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}: {name}")
