"""Suite-wide instrumentation.

Every eigenvalue sandwich check and every computed curve point is recorded
while the suite runs, so that the suite-wide acceptance checks (marked
``suite_wide``) can inspect all of them. Those tests are moved to the end of
the run. Acceptance tests marked ``criterion(n)`` get one summary line each
at the end of the terminal report.
"""

from __future__ import annotations

import contextlib
import sys
import threading
from dataclasses import dataclass, field
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from fucikhom import fucik1d, homrates, plap1d  # noqa: E402
from fucikhom.errors import SandwichViolation  # noqa: E402


@dataclass
class Ledger:
    sandwich_checks: int = 0
    sandwich_failures: list = field(default_factory=list)
    exempt: int = 0
    curve_points: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


# reproducible property-test corpora from run to run
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

LEDGER = Ledger()
CRITERIA: dict = {}

_orig_check = plap1d.check_sandwich
_orig_c_value = fucik1d.c_value


def _counting_check(lam, interval, p, theta_minus, theta_plus, rel_tol=plap1d.DEFAULT_TOL):
    try:
        return _orig_check(lam, interval, p, theta_minus, theta_plus, rel_tol)
    except SandwichViolation as exc:
        with LEDGER.lock:
            if not LEDGER.exempt:
                LEDGER.sandwich_failures.append(str(exc))
        raise
    finally:
        with LEDGER.lock:
            if not LEDGER.exempt:
                LEDGER.sandwich_checks += 1


def _recording_c_value(k, sign, s, m, n, eps, interval, p, *args, **kwargs):
    point = _orig_c_value(k, sign, s, m, n, eps, interval, p, *args, **kwargs)
    with LEDGER.lock:
        LEDGER.curve_points.append((point, m, n, interval, p))
    return point


plap1d.check_sandwich = _counting_check
fucik1d.check_sandwich = _counting_check
fucik1d.c_value = _recording_c_value
homrates.c_value = _recording_c_value


@contextlib.contextmanager
def _exempt():
    with LEDGER.lock:
        LEDGER.exempt += 1
    try:
        yield
    finally:
        with LEDGER.lock:
            LEDGER.exempt -= 1


@pytest.fixture
def ledger():
    return LEDGER


@pytest.fixture
def sandwich_exempt():
    """Context manager for tests that provoke a sandwich failure on purpose."""
    return _exempt


@pytest.fixture
def criterion_line(request):
    """Record the one-line detail shown for an acceptance criterion."""
    marker = request.node.get_closest_marker("criterion")

    def record(detail):
        CRITERIA.setdefault(marker.args[0], {})["detail"] = detail
        print(f"criterion {marker.args[0]}: {detail}")

    return record


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "suite_wide: runs after every other test")


def pytest_collection_modifyitems(session, config, items):
    items.sort(key=lambda item: item.get_closest_marker("suite_wide") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    entry = CRITERIA.setdefault(marker.args[0], {})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        entry["passed"] = rep.outcome == "passed"
        entry["name"] = item.name
        entry.setdefault("duration", 0.0)
        entry["duration"] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        entry = CRITERIA[n]
        status = "PASS" if entry.get("passed") else "FAIL"
        detail = entry.get("detail", "")
        tr.write_line(f"[{status}] criterion {n:>2} ({entry.get('duration', 0.0):.1f}s): {detail}")
