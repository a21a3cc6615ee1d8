from __future__ import annotations

import random
from itertools import combinations
from math import comb

import pytest

from conftest import GF2, GF5, GF7, QQ, pset
from oracles import circuit_oracle, e_oracle, minimal_oracle, nondegenerate_oracle
from segrekit import MPoint, PointSet, Shape, is_circuit, is_minimal
from segrekit.curves import (RncCurve, construct_collinear_block, construct_extremal,
                             construct_p2p1_circuit, curve_point, curve_points, diagonal_curve,
                             enumerate_b_k, fit_multidegree_one, identity, random_curve,
                             sample_points, span_dim)
from segrekit.errors import FieldTooSmallError, PreconditionError, ShapeError
from segrekit.projective import cross_ratio, p1
from segrekit.segre import defect_pattern


def test_curve_point_examples():
    C = diagonal_curve(3, GF5)
    assert curve_point(C, p1(2, GF5)) == MPoint.make([[2, 1]] * 3, GF5)
    V = RncCurve(Shape((2,)), GF5, (identity(3, GF5),))
    assert curve_point(V, p1(1, GF5)) == MPoint.make([[1, 1, 1]], GF5)


def test_curve_rejects_singular_maps():
    with pytest.raises(PreconditionError):
        RncCurve(Shape((1,)), GF5, (((1, 2), (2, 4)),))
    with pytest.raises(ShapeError):
        RncCurve(Shape((2,)), GF5, (identity(2, GF5),))


def test_sampled_defect_formula():
    rng = random.Random(2)
    for dims in ((1, 1, 1), (2, 1), (2, 2), (3,)):
        C = random_curve(Shape(dims), GF7, rng)
        S = sample_points(C, 5, rng)
        assert e_oracle(S) == max(0, 5 - sum(dims) - 1)


def test_fit_examples():
    S = pset((1, 1, 1), GF5, [[[t, 1]] * 3 for t in range(5)])
    assert fit_multidegree_one(S) == diagonal_curve(3, GF5)
    # equal first two factors; third factor breaks the cross ratio of the first four
    a = [0, 1, 2, 3]
    c = [0, 1, 2, 4]
    T = pset((1, 1, 1), GF7, [[[x, 1], [x, 1], [y, 1]] for x, y in zip(a, c)])
    assert cross_ratio(*(p1(x, GF7) for x in a), GF7) != cross_ratio(*(p1(y, GF7) for y in c), GF7)
    assert fit_multidegree_one(T) is None


def test_fit_recovers_sampled_curve():
    rng = random.Random(8)
    for _ in range(50):
        C = random_curve(Shape((1, 1, 1)), GF7, rng)
        S = sample_points(C, rng.randint(3, 8), rng)
        assert fit_multidegree_one(S) == C.normalized()


def test_fit_preconditions():
    with pytest.raises(PreconditionError):
        fit_multidegree_one(pset((1, 1), GF5, [[[0, 1], [0, 1]], [[1, 1], [1, 1]]]))
    with pytest.raises(PreconditionError):
        fit_multidegree_one(pset((1, 1), GF5, [[[0, 1], [0, 1]], [[0, 1], [1, 1]], [[1, 1], [2, 1]]]))
    with pytest.raises(ShapeError):
        fit_multidegree_one(pset((2, 1), GF5, [[[1, 0, 0], [0, 1]], [[0, 1, 0], [1, 1]], [[0, 0, 1], [1, 0]]]))


@pytest.mark.parametrize("p,k,expected", [(5, 1, 1), (2, 2, 6), (3, 2, 24)])
def test_enumerate_b_k_small(p, k, expected):
    from segrekit import FieldSpec
    F = FieldSpec.prime(p)
    count, it = enumerate_b_k(F, k)
    curves = list(it)
    assert count == len(curves) == expected
    point_sets = {frozenset(curve_points(C)) for C in curves}
    assert len(point_sets) == expected
    for C in curves:
        pts = curve_points(C)
        assert len(set(pts)) == p + 1
        for i in range(k):
            assert len({pt.factors[i] for pt in pts}) == p + 1


def test_curve_span_dimension():
    rng = random.Random(3)
    for dims in ((1, 1, 1), (2, 1), (1, 1)):
        assert span_dim(random_curve(Shape(dims), GF7, rng), rng) == sum(dims)
    assert span_dim(random_curve(Shape((1, 1, 1)), QQ, rng), rng) == 3


# --- constructors -------------------------------------------------------------------

def test_example_n2_contract():
    rng = random.Random(7)
    S = construct_collinear_block(Shape((1, 1)), GF5, 1, rng)
    assert len(S) == 4 and e_oracle(S) == 1 and nondegenerate_oracle(S)
    for dims, F, ee in (((2, 1), GF7, 2), ((1, 2), GF5, 1), ((2, 2), GF7, 3)):
        S = construct_collinear_block(Shape(dims), F, ee, rng)
        m = max([dims[0] - 1] + list(dims[1:]))
        assert len(S) == ee + 2 + m
        assert e_oracle(S) == ee and nondegenerate_oracle(S)


def test_example_n2_field_too_small():
    with pytest.raises(FieldTooSmallError) as exc:
        construct_collinear_block(Shape((1, 1)), GF2, 2, random.Random(0))
    assert exc.value.min_p == 3


def test_extremal_contract():
    rng = random.Random(1)
    for dims, ee in (((1, 1, 1), 1), ((2, 1), 1), ((2, 2), 2), ((1, 1), 3)):
        sh = Shape(dims)
        S = construct_extremal(sh, GF5, ee, rng)
        assert len(S) == sh.m + sh.k + ee
        assert len(S) >= sh.k + ee + 1
        assert e_oracle(S) == ee and minimal_oracle(S) and nondegenerate_oracle(S)
    S = construct_extremal(Shape((1, 1, 1)), GF5, 1, rng)
    assert fit_multidegree_one(S) is not None


@pytest.mark.parametrize("kind", ["twisted_cubic", "conic_line", "three_lines"])
def test_p2p1_circuits(kind):
    rng = random.Random(4)
    for _ in range(5):
        S = construct_p2p1_circuit(GF5, kind, rng)
        assert len(S) == 5 and circuit_oracle(S) and nondegenerate_oracle(S)
        if kind == "twisted_cubic":
            # two independent (1,1)-forms vanish on S
            assert 6 - (5 - defect_pattern(S, (1, 1))) == 2
            assert is_minimal(S)[0]
        if kind == "three_lines":
            pts = list(S)
            for i in range(2):
                fib = {}
                for pt in pts:
                    fib.setdefault(pt.forget(i), []).append(pt)
                assert max(len(v) for v in fib.values()) <= 2


def test_twisted_cubic_needs_five_points():
    with pytest.raises(FieldTooSmallError):
        construct_p2p1_circuit(GF2, "twisted_cubic", random.Random(0))


def test_b3_circuit_count_per_curve():
    rng = random.Random(5)
    C = random_curve(Shape((1, 1, 1)), GF5, rng)
    pts = curve_points(C)

    good = sum(1 for sub in combinations(pts, 5) if is_circuit(PointSet(C.shape, GF5, sub)))
    assert good == comb(6, 5)
