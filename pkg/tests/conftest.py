import json
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def oracle_values():
    return json.loads(Path(__file__).with_name("oracle_values.json").read_text())


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
