"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import pytest

from twistcoh.acceptance import CRITERIA, Workspace, run_criterion

# seconds allowed per criterion, where a budget is stated
BUDGET = {1: 5.0, 2: 5.0, 4: 180.0}


@pytest.fixture(scope="module")
def ws():
    return Workspace()


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, ws, capsys):
    res = run_criterion(number, ws)
    budget = BUDGET.get(number)
    over = budget is not None and res.seconds > budget
    if over:
        res.passed = False
        res.detail += f" over budget {budget:.0f}s"
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
