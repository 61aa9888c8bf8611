import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)


def pytest_runtest_logreport(report):
    mark = dict(report.user_properties).get("criterion")
    if mark is None:
        return
    n, desc = mark
    entry = _criteria.setdefault(n, {"desc": desc, "ok": True, "details": []})
    if report.when == "call" or report.outcome != "passed":
        if report.failed:
            entry["ok"] = False
        if report.when == "call":
            entry["details"] += [v for k, v in report.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        line = f"{'PASS' if e['ok'] else 'FAIL'} criterion {n}: {e['desc']}"
        if e["details"]:
            line += "  [" + "; ".join(e["details"]) + "]"
        terminalreporter.write_line(line)
