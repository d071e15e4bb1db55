"""One test per reproducibility criterion; each prints a PASS/FAIL line."""

import json

import pytest

from n2zhu.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.ok, json.dumps(res.detail, indent=2, default=str)
