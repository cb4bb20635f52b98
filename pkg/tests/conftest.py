from pathlib import Path

import pytest

from seqweb.webreg import registry_from_dirs

PAGES = Path(__file__).resolve().parents[1] / "pages"


@pytest.fixture(scope="session")
def pages_dir():
    return PAGES


@pytest.fixture
def registry():
    return registry_from_dirs([PAGES, PAGES / "scoping"])


# acceptance tests append "PASS ..." / "FAIL ..." lines here
CRITERIA_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda l: l.split()[1]):
            terminalreporter.write_line(line)
