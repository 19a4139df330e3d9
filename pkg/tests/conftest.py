"""Per-criterion PASS/FAIL summary for the acceptance suite.

Acceptance tests carry ``@pytest.mark.criterion(id, text)``.  A criterion
passes only if every test carrying its id passes; measured values recorded
with ``record_property("measured", ...)`` are echoed next to the verdict.
"""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        cid, text = marker.args
        entry = _RESULTS.setdefault(cid, {"text": text, "ok": True, "measured": []})
        entry["ok"] &= report.passed
        entry["measured"] += [v for k, v in report.user_properties if k == "measured"]


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS):
        entry = _RESULTS[cid]
        verdict = "PASS" if entry["ok"] else "FAIL"
        line = f"{verdict}  criterion {cid}: {entry['text']}"
        if entry["measured"]:
            line += "  [" + "; ".join(entry["measured"]) + "]"
        terminalreporter.write_line(line)
