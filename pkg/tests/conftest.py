import pytest

_acceptance = {}


@pytest.hookimpl(trylast=True)
def pytest_collection_modifyitems(items):
    for item in items:
        if item.get_closest_marker("acceptance"):
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _acceptance[item.nodeid] = [doc, "not run"]


def pytest_runtest_logreport(report):
    if report.nodeid not in _acceptance:
        return
    entry = _acceptance[report.nodeid]
    if report.when == "call" or report.outcome != "passed":
        if entry[1] in ("not run", "passed"):
            entry[1] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for doc, outcome in _acceptance.values():
        tag = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{tag:5} {doc}")


@pytest.fixture(scope="session")
def rng():
    import numpy as np

    return np.random.default_rng(20240607)
