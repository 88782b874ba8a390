import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sphkstab.catalog import get_entry, list_entries  # noqa: E402


@pytest.fixture(scope="session")
def catalog_data():
    return {name: get_entry(name).datum for name in list_entries()}


@pytest.fixture
def fixtures_dir():
    return Path(__file__).parent / "fixtures"


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
