from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GF5, GF7, QQ
from oracles import rank_oracle
from segrekit import FieldSpec, LinearSubspace, rank, span_intersect
from segrekit.errors import DegeneracyError, ShapeError
from segrekit.linalg import det, inverse, matmul, nullspace, rref
from segrekit.projective import (ProjPoint, apply_pgl2, cross_ratio, fit_pgl2, p1,
                                 pgl2_elements, projectively_equivalent)


# --- fields ------------------------------------------------------------------

def test_field_parse_and_validation():
    assert FieldSpec.parse("GF(5)") == GF5
    assert FieldSpec.parse("7") == GF7
    assert FieldSpec.parse("Q") == QQ
    for bad in (4, 1, 2**31 + 11):
        with pytest.raises(ValueError):
            FieldSpec.prime(bad)


def test_field_canonical_forms():
    assert GF5.canon(-1) == 4
    assert GF5.canon(Fraction(1, 2)) == 3
    assert QQ.canon(3) == Fraction(3)
    assert GF7.mul(GF7.inv(3), 3) == 1
    with pytest.raises(ZeroDivisionError):
        GF5.inv(0)


# --- rank --------------------------------------------------------------------

def test_rank_examples():
    assert rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]], GF5) == 3
    assert rank([[0] * 4, [0] * 4], GF5) == 0
    vander = [[t**j for j in range(3)] for t in range(4)]
    assert rank(vander, GF5) == 3 == rank_oracle(vander, 5)


def test_rank_ragged_is_shape_error():
    with pytest.raises(ShapeError):
        rank([[1, 2], [3]], GF5)


matrices = st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=0, max_size=5))


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5, 7, None]))
def test_rank_matches_sympy(M, p):
    F = QQ if p is None else FieldSpec.prime(p)
    ncols = len(M[0]) if M else 1
    assert rank(M, F, ncols) == rank_oracle(M, p, ncols)


def test_rank_invariant_under_row_and_column_operations():
    rng = random.Random(3)
    for F in (GF5, QQ):
        for _ in range(100):
            M = [[F.random(rng) for _ in range(4)] for _ in range(3)]
            r0 = rank(M, F)
            rng.shuffle(M)
            assert rank(M, F) == r0
            while True:
                G = [[F.random(rng) for _ in range(4)] for _ in range(4)]
                if det(G, F):
                    break
            assert rank(matmul(M, G, F), F) == r0
            while True:
                L = [[F.random(rng) for _ in range(3)] for _ in range(3)]
                if det(L, F):
                    break
            assert rank(matmul(L, M, F), F) == r0


def test_inverse_and_nullspace():
    M = [[1, 2], [3, 4]]
    Mi = inverse(M, QQ)
    assert matmul(M, Mi, QQ) == [[1, 0], [0, 1]]
    ns = nullspace([[1, 1, 0]], GF5, 3)
    assert len(ns) == 2
    for v in ns:
        assert (v[0] + v[1]) % 5 == 0


# --- subspaces ---------------------------------------------------------------

def test_span_intersect_examples():
    A = LinearSubspace.span([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]], GF5)
    B = LinearSubspace.span([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], GF5)
    assert span_intersect(A, B).proj_dim == 1
    assert span_intersect(A, A) == A
    with pytest.raises(ShapeError):
        span_intersect(A, LinearSubspace.span([[1, 0]], GF5))


def test_grassmann_formula_random():
    rng = random.Random(11)
    for F in (GF5, QQ):
        for _ in range(200):
            N = rng.randint(2, 6)
            A = LinearSubspace.span([[F.random(rng) for _ in range(N)] for _ in range(rng.randint(1, N))], F, N)
            B = LinearSubspace.span([[F.random(rng) for _ in range(N)] for _ in range(rng.randint(1, N))], F, N)
            inter = span_intersect(A, B)
            assert inter.proj_dim == A.proj_dim + B.proj_dim - (A + B).proj_dim
            for v in inter.basis:
                assert A.contains(v) and B.contains(v)


# --- P^1 and Mobius maps -------------------------------------------------------

def test_projpoint_normalization_idempotent():
    x = ProjPoint.make([0, 3, 6], GF7)
    assert x.coords == (0, 1, 2)
    assert ProjPoint.make(x.coords, GF7) == x
    assert p1("inf", GF5).coords == (1, 0)


def test_fit_pgl2_examples():
    zero, one, inf = p1(0, GF5), p1(1, GF5), p1("inf", GF5)
    assert fit_pgl2([zero, one, inf], [zero, one, inf], GF5) == ((1, 0), (0, 1))
    M = fit_pgl2([zero, one, inf], [one, zero, inf], GF5)
    for t in range(5):
        assert apply_pgl2(M, p1(t, GF5), GF5) == p1((1 - t) % 5, GF5)
    M = fit_pgl2([p1(0, GF5), p1(1, GF5), p1(2, GF5)], [p1(0, GF5), p1(2, GF5), p1(4, GF5)], GF5)
    for t in range(5):
        assert apply_pgl2(M, p1(t, GF5), GF5) == p1(2 * t % 5, GF5)
    with pytest.raises(DegeneracyError):
        fit_pgl2([zero, zero, inf], [zero, one, inf], GF5)


def test_projectively_equivalent_examples():
    a = [p1(t, GF7) for t in (0, 1, "inf", 2)]
    b = [p1(t, GF7) for t in (0, 1, "inf", 3)]
    assert projectively_equivalent(a, a, GF7) == ((1, 0), (0, 1))
    assert projectively_equivalent(a, b, GF7) is None
    with pytest.raises(ShapeError):
        projectively_equivalent(a, b[:3], GF7)


def test_projectively_equivalent_recovers_random_map():
    rng = random.Random(5)
    els = pgl2_elements(GF7)
    pts = [p1(t, GF7) for t in ("inf", 0, 1, 2, 3, 4, 5, 6)]
    for _ in range(200):
        M = rng.choice(els)
        a = rng.sample(pts, rng.randint(3, 8))
        b = [apply_pgl2(M, x, GF7) for x in a]
        assert projectively_equivalent(a, b, GF7) == M


def test_pgl2_order_and_cross_ratio_invariance():
    assert len(pgl2_elements(GF5)) == 120
    assert len(pgl2_elements(FieldSpec.prime(2))) == 6
    pts = [p1(t, GF7) for t in (0, 1, 3, 5)]
    cr = cross_ratio(*pts, GF7)
    for M in pgl2_elements(GF7)[::17]:
        assert cross_ratio(*(apply_pgl2(M, x, GF7) for x in pts), GF7) == cr


def test_rational_rank_stays_exact():
    # plain ints over Q used to go through float division
    M = [[1, -3, -4, 0], [1, 4, 1, 0], [1, 4, 1, 0]]
    assert rank(M, QQ, 4) == 2
    R, _ = rref(M, QQ, 4)
    assert all(isinstance(x, Fraction) for row in R for x in row)
