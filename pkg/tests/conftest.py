from importlib import resources

import pytest


def corpus_files():
    root = resources.files("charfrob") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".frob")), key=lambda p: p.name)


@pytest.fixture
def corpus_text():
    def load(name):
        return (resources.files("charfrob") / "corpus" / name).read_text(encoding="utf-8")
    return load


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _CRITERIA.get(report.nodeid)
    if marker is not None:
        marker["outcome"] = report.outcome
        marker["duration"] = report.duration


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA[item.nodeid] = {"number": m.args[0], "title": m.args[1], "outcome": "not run", "duration": 0.0}


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for info in sorted(_CRITERIA.values(), key=lambda d: d["number"]):
        status = {"passed": "PASS", "failed": "FAIL"}.get(info["outcome"], info["outcome"].upper())
        terminalreporter.write_line(
            f"criterion {info['number']:2d}: {status}  {info['duration']:7.2f}s  {info['title']}")
