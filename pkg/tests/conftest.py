"""Acceptance summary: one PASS/FAIL line per criterion after the run."""

from collections import OrderedDict

_CRITERIA = OrderedDict()
_NODE = {}
_FAILED = set()
_DETAIL = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _CRITERIA.setdefault(num, title)
            _NODE[item.nodeid] = num


def pytest_runtest_logreport(report):
    num = _NODE.get(report.nodeid)
    if num is None:
        return
    if report.failed:
        _FAILED.add(report.nodeid)
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "measured":
            _DETAIL.setdefault(report.nodeid, []).append(value)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, title in sorted(_CRITERIA.items()):
        nodes = [n for n, c in _NODE.items() if c == num]
        failed = [n for n in nodes if n in _FAILED]
        tr.write_line(f"criterion {num:>2} {'PASS' if not failed else 'FAIL'}  {title}")
        for n in nodes:
            status = "FAIL" if n in failed else "ok"
            tr.write_line(f"    [{status}] {n.split('::')[-1]}")
            for d in _DETAIL.get(n, []):
                tr.write_line(f"           {d}")
