"""Acceptance matrix: one exact check per criterion, one PASS/FAIL line each.

Run directly with ``python3 tests/test_acceptance.py`` to print just the lines.
"""
import sys

import pytest

from gerbegw.selftest import CRITERIA

RESULTS: dict[int, str] = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = CRITERIA[number]()
    RESULTS[number] = res.line()
    print(res.line())
    assert res.ok, res.details[:5]
    assert res.checks > 0


if __name__ == "__main__":
    ok = True
    for k in sorted(CRITERIA):
        res = CRITERIA[k]()
        print(res.line(), flush=True)
        ok &= res.ok
    sys.exit(0 if ok else 1)
