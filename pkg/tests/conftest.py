import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"


@pytest.fixture
def dataset_dir():
    return FIXTURES / "dataset"


# acceptance bookkeeping: one PASS/FAIL line per criterion at the end of the run
_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": 0, "skipped": 0, "details": []})
    if report.failed:
        entry["failed"] += 1
    elif report.skipped:
        entry["skipped"] += 1
    elif report.when == "call":
        entry["passed"] += 1
    detail = getattr(item, "criterion_detail", None)
    if report.when == "teardown" and detail:
        entry["details"].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS" if entry["passed"] else "SKIP"
        line = f"criterion {number:>2}: {status:<4} {entry['title']}"
        if entry["details"]:
            line += "  [" + "; ".join(entry["details"]) + "]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a short measured value to the criterion's summary line."""

    def note(text: str) -> None:
        request.node.criterion_detail = text

    return note
