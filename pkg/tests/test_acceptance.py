"""The acceptance criteria, one test each, at their stated tolerances and time budgets.

Each test prints its PASS/FAIL line; the lines are also collected into the
terminal summary.
"""

import pytest

from toric_ccc.verify import CRITERIA, run_criterion

LINES: dict[int, str] = {}


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"{c.number:02d}-{c.key}")
def test_criterion(criterion):
    result = run_criterion(criterion)
    line = result.line() + f" ({result.elapsed:.2f} s)"
    LINES[criterion.number] = line
    print(line)
    assert result.passed, line
