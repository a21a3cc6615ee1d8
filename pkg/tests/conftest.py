from __future__ import annotations

import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from segrekit import FieldSpec, MPoint, PointSet, Shape  # noqa: E402

GF2, GF3, GF5, GF7 = (FieldSpec.prime(p) for p in (2, 3, 5, 7))
QQ = FieldSpec.rational()


def pset(shape, field, coords):
    """PointSet from nested coordinate lists; ``shape`` may be a tuple."""
    return PointSet.from_coords(Shape(tuple(shape)), field, coords)


def random_point_set(shape: Shape, field: FieldSpec, n: int, rng: random.Random, small=False):
    """``n`` distinct random points; ``small`` keeps coordinates in {0, 1, -1}."""
    pts = set()
    tries = 0
    while len(pts) < n:
        tries += 1
        if tries > 1000:
            raise RuntimeError("could not draw enough distinct points")
        facs = []
        for d in shape.dims:
            while True:
                if small:
                    v = [rng.choice((0, 1, 1, -1)) for _ in range(d + 1)]
                else:
                    v = [field.random(rng) for _ in range(d + 1)]
                if any(field.canon(x) for x in v):
                    break
            facs.append(v)
        pts.add(MPoint.make(facs, field))
    return PointSet(shape, field, pts)


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
