"""Acceptance criteria 1-9, one test each.

Each test prints a PASS/FAIL line; the lines are also collected and shown
in the terminal summary (see ``conftest.py``).
"""
import pytest

from qetlab import checks

RESULTS = {}

# runtime limits in seconds, where one is stated
TIME_LIMITS = {1: 1.0, 2: 10.0, 8: 60.0}


def _record(number, result):
    limit = TIME_LIMITS.get(number)
    in_time = limit is None or result.seconds < limit
    status = "PASS" if result.passed and in_time else "FAIL"
    timing = f"{result.seconds:.2f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    line = (f"criterion {number}: {status}  residual={result.residual:.3e} "
            f"tol={result.tolerance:.1e} time={timing}")
    if result.detail:
        line += f"  [{result.detail}]"
    RESULTS[number] = line
    print(line)
    return in_time


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    result = checks.CRITERIA[number - 1]()
    in_time = _record(number, result)
    assert result.passed, result.line()
    assert in_time, f"criterion {number} took {result.seconds:.2f}s"
