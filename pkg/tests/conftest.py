from __future__ import annotations

# criterion number -> (all passed so far, test labels)
_criteria: dict[str, tuple[int, str]] = {}
_results: dict[int, tuple[bool, list[str]]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None and m.args:
            _criteria[item.nodeid] = (m.args[0], m.kwargs.get("label", item.name))


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria or (report.when != "call" and not report.failed):
        return
    number, label = _criteria[report.nodeid]
    ok, labels = _results.get(number, (True, []))
    if label not in labels:
        labels.append(label)
    _results[number] = (ok and report.passed, labels)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        ok, labels = _results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} ({', '.join(labels)})")
