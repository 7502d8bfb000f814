"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the full set takes several
minutes on one core (the two one-level density criteria dominate).
"""

import pytest

from cubic_hecke.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, capsys):
    result = run_one(number, quick=False, seed=0, workers=1)
    with capsys.disabled():
        print("\n" + result.line())
        for extra in result.info:
            print(f"    {extra}")
    assert result.passed, result.summary
