"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; either
way one PASS/FAIL line per criterion is printed.
"""

import sys
import time

import pytest

from resonhhl.acceptance import CRITERIA, CriterionResult, run_criterion
from resonhhl.fixtures import load_fixture

RESULTS: list[CriterionResult] = []
_START = time.perf_counter()


@pytest.fixture(scope="module")
def fixture_data():
    return load_fixture(verify_checksum=False)


@pytest.mark.parametrize("cid", [c[0] for c in CRITERIA])
def test_criterion(cid, fixture_data):
    result = run_criterion(cid, fixture_data)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.detail


def test_suite_runtime():
    # AC9: every criterion above plus this one, well within five minutes
    total = time.perf_counter() - _START
    result = CriterionResult("AC9", "suite runtime", total < 300.0, f"{total:.1f}s total (limit 300s)", total)
    RESULTS.append(result)
    print(result.line())
    assert result.passed


if __name__ == "__main__":
    from resonhhl.acceptance import run_acceptance

    results = run_acceptance()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
