"""The ten acceptance criteria, each at its stated tolerance and time limit.

Run with ``pytest -s tests/test_acceptance.py`` to see one pass/fail line per criterion.
"""

import pytest

from ctopo.acceptance import CHECKS


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion-{k}" for k in range(1, len(CHECKS) + 1)])
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
