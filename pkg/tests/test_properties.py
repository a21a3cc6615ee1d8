"""Small runs of the randomized suites; the acceptance run uses 1000 cases per field."""

from __future__ import annotations

import pytest

from conftest import GF5, QQ
from property_suites import SUITES


@pytest.mark.parametrize("field", [GF5, QQ], ids=str)
@pytest.mark.parametrize("suite", SUITES, ids=lambda s: s.__name__)
def test_suite_small(suite, field):
    res = suite(field, 60, seed=7)
    assert res.cases == 60
    assert res.ok, res.failures
