"""The acceptance battery, one test per criterion.

Each test prints its "criterion N PASS/FAIL" line; the lines are repeated
in a summary section at the end of the pytest run.
"""
import pytest

from breuil_lattices.suite import run_suite

from .conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def criteria():
    return {c.number: c for c in run_suite(p=5, cap=16, seed=0)}


@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(criteria, number):
    crit = criteria[number]
    line = crit.line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    failed = [f"{i.name}: {i.detail}" for i in crit.items if not i.ok]
    assert crit.ok, "\n".join(failed)
