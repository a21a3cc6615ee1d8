"""Rational normal curves in multiprojective spaces.

A curve of multidegree ``(n_1, ..., n_k)`` is the image of
``t -> (M_1 v_{n_1}(t), ..., M_k v_{n_k}(t))`` where ``v_n`` is the degree-n
Veronese map ``(t0 : t1) -> (t0^n, t0^(n-1) t1, ..., t1^n)`` and each ``M_i``
is an invertible ``(n_i + 1)``-square matrix.  For ``(P^1)^k`` the
reparametrization freedom is used up by forcing ``M_1 = id``, which makes
the matrix tuple a unique label of the curve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import FieldTooSmallError, PreconditionError, ShapeError, UnsupportedFieldError
from .field import FieldSpec, Scalar, is_prime
from .linalg import det, inverse, matmul, matvec, rank
from .projective import (ProjPoint, iter_p1, normalize_matrix, pgl2_elements,
                         projectively_equivalent)
from .segre import (MPoint, PointSet, Shape, defect, e, is_circuit, is_minimal,
                    is_nondegenerate)

Matrix = Tuple[Tuple[Scalar, ...], ...]

MAX_TRIES = 500


def veronese(n: int, t: ProjPoint, field: FieldSpec) -> List[Scalar]:
    t0, t1 = t.coords
    return [field.canon(t0 ** (n - j) * t1 ** j) for j in range(n + 1)]


@dataclass(frozen=True)
class RncCurve:
    shape: Shape
    field: FieldSpec
    maps: Tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.maps) != self.shape.k:
            raise ShapeError("one matrix per factor")
        for n, M in zip(self.shape.dims, self.maps):
            if len(M) != n + 1 or any(len(row) != n + 1 for row in M):
                raise ShapeError(f"factor matrix must be {n + 1}x{n + 1}")
            if not det(M, self.field):
                raise PreconditionError("factor matrix is singular")

    @classmethod
    def make(cls, shape: Shape, field: FieldSpec, maps: Sequence) -> "RncCurve":
        return cls(shape, field, tuple(normalize_matrix(M, field) for M in maps)).normalized()

    def normalized(self) -> "RncCurve":
        """Canonical form: every matrix scaled, and ``M_1 = id`` on (P^1)^k."""
        maps = [normalize_matrix(M, self.field) for M in self.maps]
        if self.shape.all_ones:
            # reparametrize t -> M_1^{-1} t
            inv1 = inverse(maps[0], self.field)
            maps = [normalize_matrix(matmul(M, inv1, self.field), self.field) for M in maps]
        return RncCurve(self.shape, self.field, tuple(maps))

    def point(self, t: ProjPoint) -> MPoint:
        return curve_point(self, t)

    def to_json(self) -> dict:
        return {"shape": list(self.shape.dims), "field": self.field.to_json(),
                "maps": [[[_scalar(x) for x in row] for row in M] for M in self.maps]}


def _scalar(x):
    return x if isinstance(x, int) else str(x)


def curve_point(C: RncCurve, t: ProjPoint) -> MPoint:
    if len(t) != 2:
        raise ShapeError("curve parameters live on P^1")
    f = C.field
    return MPoint(tuple(ProjPoint.make(matvec(M, veronese(n, t, f), f), f)
                        for n, M in zip(C.shape.dims, C.maps)))


def curve_points(C: RncCurve) -> List[MPoint]:
    """All F_p-rational points, in parameter order."""
    if not C.field.is_prime:
        raise UnsupportedFieldError("a curve over Q has infinitely many points")
    return [curve_point(C, t) for t in iter_p1(C.field)]


def distinct_parameters(field: FieldSpec, n: int, rng) -> List[ProjPoint]:
    """``n`` distinct random points of P^1."""
    if field.is_prime:
        if n > field.p + 1:
            raise FieldTooSmallError(f"P^1(GF({field.p})) has only {field.p + 1} points",
                                     min_prime_at_least(n - 1))
        return rng.sample(list(iter_p1(field)), n)
    out = {}
    while len(out) < n:
        t = ProjPoint.make((field.random(rng, -9, 9), field.random(rng, 1, 9)), field)
        out.setdefault(t, None)
    return list(out)


def sample_points(C: RncCurve, n: int, rng) -> PointSet:
    params = distinct_parameters(C.field, n, rng)
    return PointSet(C.shape, C.field, [curve_point(C, t) for t in params])


def min_prime_at_least(n: int) -> int:
    q = max(2, n)
    while not is_prime(q):
        q += 1
    return q


def random_invertible(n: int, field: FieldSpec, rng) -> Matrix:
    while True:
        M = [[field.random(rng) for _ in range(n)] for _ in range(n)]
        if det(M, field):
            return normalize_matrix(M, field)


def random_curve(shape: Shape, field: FieldSpec, rng) -> RncCurve:
    return RncCurve.make(shape, field, [random_invertible(n + 1, field, rng) for n in shape.dims])


def identity(n: int, field: FieldSpec) -> Matrix:
    return tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n))


def diagonal_curve(k: int, field: FieldSpec) -> RncCurve:
    return RncCurve(Shape((1,) * k), field, (identity(2, field),) * k)


def _check_all_ones(S: PointSet):
    if not S.shape.all_ones:
        raise ShapeError(f"shape {S.shape} is not (1,...,1)")


def fit_multidegree_one(S: PointSet) -> Optional[RncCurve]:
    """The unique multidegree-(1,...,1) curve through ``S``, if any.

    Such a curve exists exactly when the ordered factor projections of S are
    pairwise projectively equivalent.
    """
    _check_all_ones(S)
    if len(S) < 3:
        raise PreconditionError("need at least three points")
    for i in range(S.shape.k):
        if len(set(S.factor(i))) != len(S):
            raise PreconditionError(f"projection to factor {i + 1} is not injective")
    f = S.field
    base = S.factor(0)
    maps = [identity(2, f)]
    for i in range(1, S.shape.k):
        M = projectively_equivalent(base, S.factor(i), f)
        if M is None:
            return None
        maps.append(M)
    C = RncCurve(S.shape, f, tuple(maps))
    assert all(curve_point(C, pt.factors[0]) == pt for pt in S), "fitted curve misses a point"
    return C


def equivalence_witnesses(S: PointSet) -> List[Optional[Matrix]]:
    """Per factor i >= 2, the Möbius map pi_1(S) -> pi_i(S) or None."""
    _check_all_ones(S)
    base = S.factor(0)
    return [projectively_equivalent(base, S.factor(i), S.field) for i in range(1, S.shape.k)]


def b_k_count(field: FieldSpec, k: int) -> int:
    p = field.p
    return (p ** 3 - p) ** (k - 1)


def enumerate_b_k(field: FieldSpec, k: int) -> Tuple[int, Iterator[RncCurve]]:
    """All multidegree-(1,...,1) curves of (P^1)^k over GF(p), as (count, iterator)."""
    if not field.is_prime:
        raise UnsupportedFieldError("B_k is infinite over Q")
    if k < 1:
        raise ValueError("k must be >= 1")
    shape = Shape((1,) * k)
    eye = identity(2, field)
    group = pgl2_elements(field)

    def gen():
        for rest in itertools.product(group, repeat=k - 1):
            yield RncCurve(shape, field, (eye,) + tuple(rest))

    return b_k_count(field, k), gen()


# --- constructions ---------------------------------------------------------

def _require_prime_room(field: FieldSpec, needed: int, what: str):
    """``needed`` distinct points of P^1 must exist."""
    if field.is_prime and field.p + 1 < needed:
        min_p = min_prime_at_least(needed - 1)
        raise FieldTooSmallError(f"{what} needs {needed} points on P^1; use p >= {min_p}", min_p)


def _random_point(n: int, field: FieldSpec, rng) -> ProjPoint:
    while True:
        v = [field.random(rng) for _ in range(n + 1)]
        if any(v):
            return ProjPoint.make(v, field)


def _random_mpoint(shape: Shape, field: FieldSpec, rng) -> MPoint:
    return MPoint(tuple(_random_point(n, field, rng) for n in shape.dims))


def _spans(vectors, n: int, field: FieldSpec) -> bool:
    return rank([list(v) for v in vectors], field, n + 1) == n + 1


def _line_points(u: ProjPoint, v: ProjPoint, params: Sequence[ProjPoint], field: FieldSpec) -> List[ProjPoint]:
    """Points ``a u + b v`` of the line through u and v for each parameter (a : b)."""
    return [ProjPoint.make([field.add(field.mul(a, x), field.mul(b, y))
                            for x, y in zip(u.coords, v.coords)], field)
            for a, b in (t.coords for t in params)]


def _random_line(n: int, field: FieldSpec, rng) -> Tuple[ProjPoint, ProjPoint]:
    while True:
        u, v = _random_point(n, field, rng), _random_point(n, field, rng)
        if u != v:
            return u, v


def construct_collinear_block(shape: Shape, field: FieldSpec, e_target: int, rng) -> PointSet:
    """``e + 2`` points on a factor-1 line plus ``m`` spanning points.

    ``m = max(n_1 - 1, n_2, ..., n_k)``; the result is nondegenerate with
    ``#S = e + 2 + m`` and defect ``e``.
    """
    if shape.k < 2:
        raise PreconditionError("needs at least two factors")
    if e_target < 1:
        raise ValueError("e must be >= 1")
    _require_prime_room(field, e_target + 2, "the collinear block")
    dims = shape.dims
    m = max([dims[0] - 1] + list(dims[1:]))
    for _ in range(MAX_TRIES):
        u, v = _random_line(dims[0], field, rng)
        line = _line_points(u, v, distinct_parameters(field, e_target + 2, rng), field)
        others = [_random_point(n, field, rng) for n in dims[1:]]
        B = [MPoint((a,) + tuple(others)) for a in line]
        A = [_random_mpoint(shape, field, rng) for _ in range(m)]
        if len(set(A + B)) != len(A) + len(B):
            continue
        if not _spans([x.factors[0].coords for x in A] + [u.coords, v.coords], dims[0], field):
            continue
        S = PointSet(shape, field, A + B)
        if is_nondegenerate(S) and e(S) == e_target:
            assert len(S) == e_target + 2 + m
            return S
    raise FieldTooSmallError(f"no example found over {field} after {MAX_TRIES} tries")


def _embed_p1k(shape: Shape, field: FieldSpec, rng):
    """Random linear embedding (P^1)^k -> Y via one line per factor."""
    lines = []
    for n in shape.dims:
        while True:
            u, v = _random_line(n, field, rng)
            if rank([u.coords, v.coords], field, n + 1) == 2:
                lines.append((u, v))
                break

    def emb(pt: MPoint) -> MPoint:
        return MPoint(tuple(_line_points(u, v, [f], field)[0] for (u, v), f in zip(lines, pt.factors)))

    return emb


def construct_extremal(shape: Shape, field: FieldSpec, e_target: int, rng) -> PointSet:
    """Minimal nondegenerate set with defect ``e`` and ``m + k + e`` points.

    ``k + e + 1`` points on a multidegree-(1,...,1) curve inside an embedded
    ``(P^1)^k``, plus ``m - 1`` random points (``m = max n_i``).
    """
    k = shape.k
    if k < 2:
        raise PreconditionError("needs at least two factors")
    if e_target < 1:
        raise ValueError("e must be >= 1")
    _require_prime_room(field, k + e_target + 1, "the curve block")
    m = max(shape.dims)
    ones = Shape((1,) * k)
    for _ in range(MAX_TRIES):
        emb = _embed_p1k(shape, field, rng)
        C = random_curve(ones, field, rng)
        core = [emb(pt) for pt in sample_points(C, k + e_target + 1, rng)]
        extra = [_random_mpoint(shape, field, rng) for _ in range(m - 1)]
        if len(set(core + extra)) != len(core) + len(extra):
            continue
        S = PointSet(shape, field, core + extra)
        if is_nondegenerate(S) and e(S) == e_target and is_minimal(S)[0]:
            assert len(S) == m + k + e_target
            return S
    raise FieldTooSmallError(f"no extremal set found over {field} after {MAX_TRIES} tries")


P2P1 = Shape((2, 1))
P2P1_KINDS = ("twisted_cubic", "conic_line", "three_lines")


def _p2p1_twisted_cubic(field: FieldSpec, rng) -> PointSet:
    return sample_points(random_curve(P2P1, field, rng), 5, rng)


def _p2p1_conic_line(field: FieldSpec, rng) -> PointSet:
    """3 points on a conic component and 2 on a line component, off the node."""
    if rng.random() < 0.5:
        # plane conic in P^2 x {y} and the fiber line {c} x P^1, c on the conic
        M = random_invertible(3, field, rng)
        params = distinct_parameters(field, 4, rng)
        conic = [ProjPoint.make(matvec(M, veronese(2, t, field), field), field) for t in params]
        y = _random_point(1, field, rng)
        c = conic[3]
        fiber = [z for z in distinct_parameters(field, 3, rng) if z != y][:2]
        pts = [MPoint((x, y)) for x in conic[:3]] + [MPoint((c, z)) for z in fiber]
    else:
        # graph of a Möbius map on a line l of P^2, and l' x {f(c)} with c = l ∩ l'
        u, v = _random_line(2, field, rng)
        g = random_invertible(2, field, rng)
        params = distinct_parameters(field, 4, rng)
        ell = _line_points(u, v, params, field)
        graph = [MPoint((x, ProjPoint.make(matvec(g, t.coords, field), field))) for x, t in zip(ell, params)]
        c, y = graph[3].factors
        w = _random_point(2, field, rng)
        second = [x for x in _line_points(c, w, distinct_parameters(field, 3, rng), field) if x != c][:2]
        pts = graph[:3] + [MPoint((x, y)) for x in second]
    return PointSet(P2P1, field, pts)


def _p2p1_three_lines(field: FieldSpec, rng) -> PointSet:
    """Chain l1 x {y1}, {c} x P^1, l2 x {y2} with c = l1 ∩ l2; split 2 + 1 + 2."""
    c = _random_point(2, field, rng)
    w1, w2 = _random_point(2, field, rng), _random_point(2, field, rng)
    y1, y2, z = distinct_parameters(field, 3, rng)
    first = [x for x in _line_points(c, w1, distinct_parameters(field, 3, rng), field) if x != c][:2]
    second = [x for x in _line_points(c, w2, distinct_parameters(field, 3, rng), field) if x != c][:2]
    pts = [MPoint((x, y1)) for x in first] + [MPoint((c, z))] + [MPoint((x, y2)) for x in second]
    return PointSet(P2P1, field, pts)


def construct_p2p1_circuit(field: FieldSpec, kind: str, rng) -> PointSet:
    """A 5-point nondegenerate circuit of P^2 x P^1 lying on a curve of the given kind."""
    builders = {"twisted_cubic": (_p2p1_twisted_cubic, 5),
                "conic_line": (_p2p1_conic_line, 4),
                "three_lines": (_p2p1_three_lines, 3)}
    if kind not in builders:
        raise ValueError(f"kind must be one of {P2P1_KINDS}")
    build, need = builders[kind]
    _require_prime_room(field, need, kind)
    for _ in range(MAX_TRIES):
        try:
            S = build(field, rng)
        except (PreconditionError, ValueError):
            continue
        if len(S) == 5 and is_circuit(S) and is_nondegenerate(S):
            return S
    raise FieldTooSmallError(f"no {kind} circuit found over {field} after {MAX_TRIES} tries")


def span_dim(C: RncCurve, rng, samples: Optional[int] = None) -> int:
    """Projective dimension of the span of the Segre image of ``C``."""
    n = sum(C.shape.dims) + 2 if samples is None else samples
    if C.field.is_prime:
        pts = curve_points(C)
        S = PointSet(C.shape, C.field, pts)
    else:
        S = sample_points(C, n, rng)
    return defect(S)[0]
