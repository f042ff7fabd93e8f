import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SUITE_LIMIT_SECONDS = 600


def pytest_configure(config):
    config._acceptance = []
    config._started = time.perf_counter()


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion."""
    def record(number, title, checks):
        ok = all(c[1] for c in checks)
        request.config._acceptance.append((number, title, ok, checks))
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = sorted(config._acceptance)
    if not rows:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title, ok, checks in rows:
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")
        for name, passed, observed in checks:
            if not passed:
                tr.write_line(f"        failed check: {name} (observed {observed})")
    elapsed = time.perf_counter() - config._started
    tr.write_line(f"suite wall time {elapsed:.1f} s (limit {SUITE_LIMIT_SECONDS} s): "
                  f"{'PASS' if elapsed < SUITE_LIMIT_SECONDS else 'FAIL'}")
