"""Acceptance criteria, one test each.

The criteria share expensive runs through a module-scoped ``Context``; the
whole module takes several minutes on one core.
"""
import pytest

from qphase.acceptance import CRITERIA, Context, run_acceptance

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def ctx():
    return Context()


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA],
                         ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, ctx, capsys):
    (res,) = run_acceptance({number}, ctx=ctx, stream=None)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
