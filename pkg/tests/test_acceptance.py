"""End-to-end acceptance checks: every rate and certificate the toolkit
advertises, at fixed seeds and stated tolerances."""

import pytest

from convexkit import acceptance

_SLOW = {cid for cid, _, slow in acceptance.CRITERIA if slow}


@pytest.mark.parametrize(
    "cid",
    [pytest.param(cid, marks=pytest.mark.slow) if cid in _SLOW else cid
     for cid in acceptance.criterion_ids()])
def test_criterion(cid):
    acceptance.run_criterion(cid)


def test_ids_sorted_and_unique():
    ids = acceptance.criterion_ids()
    assert ids == sorted(ids)
    assert len(ids) == len(set(ids)) == 18
