from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

_criteria: list[tuple[str, str]] = []


@pytest.fixture
def criterion(request):
    """Register a test as an acceptance criterion; outcome is reported at the end."""

    def register(label: str) -> None:
        request.node.user_properties.append(("criterion", label))

    return register


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, label in report.user_properties:
        if key == "criterion":
            _criteria.append((label, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in sorted(_criteria):
        terminalreporter.write_line(f"{outcome}  {label}")


@pytest.fixture
def three_cities() -> Path:
    return FIXTURES / "three_cities.txt"
