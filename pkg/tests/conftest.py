import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")

MINICORPUS = os.path.join(os.path.dirname(__file__), "..", "src", "corpusforge", "data", "minicorpus")

_results = {}


@pytest.fixture(scope="session")
def minicorpus_dir():
    return os.path.abspath(MINICORPUS)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[number] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, outcome = _results[number]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
