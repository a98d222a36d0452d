"""Acceptance criteria 1-12 at the full level and their stated tolerances.

Each criterion prints one PASS/FAIL line; the collected lines are repeated
in the terminal summary by ``conftest.py``.
"""
import pytest

from haarint import verify

RESULTS = {}


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(verify.CRITERIA))
def test_criterion(number):
    outcome = verify.run_criterion(number, "full")
    status = "PASS" if outcome.passed else "FAIL"
    failing = [r for r in outcome.records if not r["pass"]]
    detail = f"{len(outcome.records)} checks, {len(failing)} failing, {outcome.elapsed:.1f} s"
    if failing:
        r = failing[0]
        detail += f"; first failure: {r['label']} ({r['discrepancy']:.3g} > {r['tolerance']:.3g})"
    line = f"criterion {number:2d} [{status}] {outcome.title}: {detail}"
    RESULTS[number] = line
    print(line)
    if not outcome.passed:
        pytest.fail(line, pytrace=False)
