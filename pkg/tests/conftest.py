import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker
    if report.when == "setup" and report.passed:
        return
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    _CRITERIA.setdefault(number, []).append((title, report.outcome, elapsed))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        runs = _CRITERIA[number]
        ok = all(outcome == "passed" for _, outcome, _ in runs)
        elapsed = sum(t for _, _, t in runs)
        title = runs[0][0]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.1f} s)")
