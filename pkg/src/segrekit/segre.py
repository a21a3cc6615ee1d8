"""Finite point sets on multiprojective spaces and their Segre invariants.

A point of ``Y = P^{n_1} x ... x P^{n_k}`` is an :class:`MPoint`; its Segre
image is the Kronecker product of its factor coordinates, factor 1 most
significant.  The defect of a finite set is ``e(S) = #S - rank(nu(S))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import prod
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (CenterHitError, DuplicatePointError, FieldTooSmallError,
                     PreconditionError, ShapeError, UnsupportedFieldError)
from .field import FieldSpec, Scalar
from .linalg import (LinearSubspace, kron, normalize_vector, nullspace, rank,
                     rref, solve, span_intersect, transpose)
from .projective import ProjPoint, projective_points


@dataclass(frozen=True)
class Shape:
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims:
            raise ShapeError("a shape needs at least one factor")
        if any(n < 1 for n in dims):
            raise ShapeError(f"factor dimensions must be >= 1, got {dims}")

    @classmethod
    def parse(cls, text: str) -> "Shape":
        return cls(tuple(int(x) for x in str(text).replace(" ", "").split(",") if x))

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def N(self) -> int:
        return prod(n + 1 for n in self.dims)

    @property
    def r(self) -> int:
        return self.N - 1

    @property
    def m(self) -> int:
        return max(self.dims)

    @property
    def all_ones(self) -> bool:
        return all(n == 1 for n in self.dims)

    def __str__(self):
        return "x".join(f"P{n}" for n in self.dims)


@dataclass(frozen=True, order=True)
class MPoint:
    factors: Tuple[ProjPoint, ...]

    @classmethod
    def make(cls, coords: Sequence[Sequence], field: FieldSpec) -> "MPoint":
        return cls(tuple(ProjPoint.make(c, field) for c in coords))

    def __getitem__(self, i) -> ProjPoint:
        return self.factors[i]

    def __len__(self):
        return len(self.factors)

    def forget(self, i: int) -> Tuple[ProjPoint, ...]:
        """The image under eta_i, which drops factor ``i``."""
        return self.factors[:i] + self.factors[i + 1:]

    def replace(self, i: int, pt: ProjPoint) -> "MPoint":
        return MPoint(self.factors[:i] + (pt,) + self.factors[i + 1:])

    def __repr__(self):
        return "[" + ", ".join(repr(f) for f in self.factors) + "]"


def _check_point(shape: Shape, pt: MPoint):
    if len(pt.factors) != shape.k or any(len(f) != n + 1 for f, n in zip(pt.factors, shape.dims)):
        raise ShapeError(f"point {pt!r} does not lie on {shape}")


def segre_embed(shape: Shape, pt: MPoint, field: FieldSpec) -> Tuple[Scalar, ...]:
    """Kronecker product of the factor coordinates (normalized)."""
    _check_point(shape, pt)
    v = reduce(lambda a, b: kron(a, b, field), (f.coords for f in pt.factors))
    return tuple(v)


class PointSet:
    """A finite set of distinct points of one multiprojective space.

    Points are kept in canonical (sorted) order, so two sets with the same
    points compare and hash equal.
    """

    __slots__ = ("shape", "field", "points", "__dict__")

    def __init__(self, shape: Shape, field: FieldSpec, points: Iterable[MPoint]):
        pts = list(points)
        for pt in pts:
            _check_point(shape, pt)
        ordered = tuple(sorted(pts))
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise DuplicatePointError(f"duplicate point {a!r}")
        self.shape = shape
        self.field = field
        self.points = ordered

    @classmethod
    def from_coords(cls, shape, field: FieldSpec, coords) -> "PointSet":
        if not isinstance(shape, Shape):
            shape = Shape(tuple(shape))
        return cls(shape, field, [MPoint.make(c, field) for c in coords])

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, pt):
        return pt in self.points

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.shape == other.shape
                and self.field == other.field and self.points == other.points)

    def __hash__(self):
        return hash((self.shape, self.field, self.points))

    def __repr__(self):
        return f"PointSet({self.shape}, {self.field}, {list(self.points)!r})"

    def with_points(self, points: Iterable[MPoint]) -> "PointSet":
        return PointSet(self.shape, self.field, points)

    def without(self, *pts: MPoint) -> "PointSet":
        drop = set(pts)
        return self.with_points(p for p in self.points if p not in drop)

    def take(self, indices: Iterable[int]) -> "PointSet":
        return self.with_points(self.points[i] for i in indices)

    @cached_property
    def embedded(self) -> Tuple[Tuple[Scalar, ...], ...]:
        return tuple(segre_embed(self.shape, pt, self.field) for pt in self.points)

    def factor(self, i: int) -> List[ProjPoint]:
        return [pt.factors[i] for pt in self.points]


def _require_nonempty(S: PointSet):
    if not len(S):
        raise PreconditionError("the point set is empty")


def _e_rows(rows, field: FieldSpec, ncols: int) -> int:
    return len(rows) - rank(rows, field, ncols)


def defect(S: PointSet) -> Tuple[int, int]:
    """``(dim <nu(S)>, e(S))``."""
    _require_nonempty(S)
    rk = rank(S.embedded, S.field, S.shape.N)
    return rk - 1, len(S) - rk


def e(S: PointSet) -> int:
    """The defect ``e(S)``; zero for the empty set."""
    if not len(S):
        return 0
    return len(S) - rank(S.embedded, S.field, S.shape.N)


def defect_pattern(S: PointSet, mask: Sequence[int]) -> int:
    """``h^1`` of the ideal sheaf of S twisted by the 0/1 multidegree ``mask``."""
    _require_nonempty(S)
    mask = tuple(int(a) for a in mask)
    if len(mask) != S.shape.k or any(a not in (0, 1) for a in mask):
        raise ShapeError(f"pattern must be a 0/1 vector of length {S.shape.k}")
    if not any(mask):
        raise ShapeError("the all-zero pattern is not allowed")
    field = S.field
    rows = []
    for pt in S.points:
        vecs = [f.coords for f, a in zip(pt.factors, mask) if a]
        rows.append(reduce(lambda a, b: kron(a, b, field), vecs))
    ncols = prod(n + 1 for n, a in zip(S.shape.dims, mask) if a)
    return _e_rows(rows, field, ncols)


def epsilon(k: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(k))


def epsilon_hat(k: int, i: int) -> Tuple[int, ...]:
    return tuple(0 if j == i else 1 for j in range(k))


@dataclass(frozen=True)
class MinimalSubspace:
    dims: Tuple[int, ...]
    frames: Tuple[Tuple[Tuple[Scalar, ...], ...], ...]
    reduced: Optional[PointSet]

    @property
    def nontrivial_dims(self) -> Tuple[int, ...]:
        return tuple(d for d in self.dims if d > 0)


def minimal_subspace(S: PointSet) -> MinimalSubspace:
    """Per-factor spans of the projections of S, and S in frame coordinates.

    Factors collapsing to a point are reported with dimension 0 and dropped
    from the shape of ``reduced`` (None if every factor collapses).
    """
    _require_nonempty(S)
    field = S.field
    dims, frames = [], []
    new_factor_coords = []
    for i, n in enumerate(S.shape.dims):
        vecs = [f.coords for f in S.factor(i)]
        basis, _ = rref(vecs, field, n + 1)
        dims.append(len(basis) - 1)
        frames.append(tuple(tuple(b) for b in basis))
        if len(basis) > 1:
            bt = transpose(basis)
            new_factor_coords.append([solve(bt, list(v), field) for v in vecs])
        else:
            new_factor_coords.append(None)
    kept = [i for i, d in enumerate(dims) if d > 0]
    reduced = None
    if kept:
        shape = Shape(tuple(dims[i] for i in kept))
        pts = [MPoint.make([new_factor_coords[i][j] for i in kept], field) for j in range(len(S))]
        reduced = PointSet(shape, field, pts)
    return MinimalSubspace(tuple(dims), tuple(frames), reduced)


def is_nondegenerate(S: PointSet) -> bool:
    field = S.field
    for i, n in enumerate(S.shape.dims):
        if len(S) < n + 1 or rank([f.coords for f in S.factor(i)], field, n + 1) != n + 1:
            return False
    return True


def is_minimal(S: PointSet) -> Tuple[bool, List[bool]]:
    """(minimal, [i-minimal for each factor i])."""
    _require_nonempty(S)
    per = []
    for i in range(S.shape.k):
        images = [pt.forget(i) for pt in S.points]
        per.append(len(set(images)) == len(images))
    return all(per), per


def essential_flags(S: PointSet) -> List[bool]:
    """``e(S - {p}) == e(S) - 1`` for each point, in S's order."""
    base = e(S)
    rows = S.embedded
    field, N = S.field, S.shape.N
    flags = []
    for j in range(len(S)):
        sub = rows[:j] + rows[j + 1:]
        flags.append(base > 0 and _e_rows(sub, field, N) == base - 1)
    return flags


def is_circuit(S: PointSet) -> bool:
    """Dependent with every proper subset independent.

    Checked as ``e(S) == 1`` with every point essential; see
    docs/circuit_equivalence.md.
    """
    if len(S) < 2:
        return False
    if e(S) != 1:
        return False
    return all(essential_flags(S))


def essential_partition(S: PointSet) -> Tuple[PointSet, PointSet]:
    """(kernel, tail) of a dependent set."""
    base = e(S)
    if base <= 0:
        raise PreconditionError("essential partition needs a linearly dependent set")
    flags = essential_flags(S)
    kernel = S.with_points(p for p, f in zip(S.points, flags) if f)
    tail = S.with_points(p for p, f in zip(S.points, flags) if not f)
    assert e(kernel) == base, "kernel lost defect"
    return kernel, tail


def is_strongly_essential(S: PointSet) -> bool:
    base = e(S)
    if base <= 0:
        raise PreconditionError("strong essentiality needs a linearly dependent set")
    rows = S.embedded
    size = len(S) - base
    for idx in itertools.combinations(range(len(S)), size):
        if _e_rows([rows[i] for i in idx], S.field, S.shape.N):
            return False
    return True


@dataclass(frozen=True)
class DefectReport:
    span_dim: int
    defect_e: int
    kernel: PointSet
    tail: PointSet
    essential_flags: Tuple[bool, ...]
    minimal: bool
    i_minimal: Tuple[bool, ...]
    minimal_subspace_dims: Tuple[int, ...]
    nondegenerate: bool
    circuit: bool
    strongly_essential: bool

    def to_json(self) -> dict:
        return {
            "span_dim": self.span_dim,
            "defect_e": self.defect_e,
            "linearly_dependent": self.defect_e > 0,
            "kernel": [point_to_json(p) for p in self.kernel],
            "tail": [point_to_json(p) for p in self.tail],
            "kernel_size": len(self.kernel),
            "tail_size": len(self.tail),
            "essential_flags": list(self.essential_flags),
            "minimal": self.minimal,
            "i_minimal": list(self.i_minimal),
            "minimal_subspace_dims": list(self.minimal_subspace_dims),
            "nondegenerate": self.nondegenerate,
            "circuit": self.circuit,
            "strongly_essential": self.strongly_essential,
        }


def point_to_json(pt: MPoint) -> list:
    """Per-factor integer coordinates; rational points get denominators cleared."""
    return [_integer_coords(f.coords) for f in pt.factors]


def _integer_coords(coords) -> list:
    if all(isinstance(c, int) for c in coords):
        return list(coords)
    fr = [Fraction(c) for c in coords]
    den = math.lcm(*(f.denominator for f in fr))
    ints = [int(f * den) for f in fr]
    lead = next(c for c in ints if c)
    return [-c for c in ints] if lead < 0 else ints


def analyze(S: PointSet) -> DefectReport:
    """Every invariant of S at once."""
    span_dim, ee = defect(S)
    flags = essential_flags(S)
    if ee > 0:
        kernel = S.with_points(p for p, f in zip(S.points, flags) if f)
        tail = S.with_points(p for p, f in zip(S.points, flags) if not f)
        strong = is_strongly_essential(S)
    else:
        kernel, tail, strong = S.with_points(()), S, False
    minimal, per = is_minimal(S)
    ms = minimal_subspace(S)
    return DefectReport(
        span_dim=span_dim,
        defect_e=ee,
        kernel=kernel,
        tail=tail,
        essential_flags=tuple(flags),
        minimal=minimal,
        i_minimal=tuple(per),
        minimal_subspace_dims=ms.dims,
        nondegenerate=ms.dims == S.shape.dims,
        circuit=ee == 1 and all(flags),
        strongly_essential=strong,
    )


# --- moves and projections -------------------------------------------------

def _random_proj_point(n: int, field: FieldSpec, rng) -> ProjPoint:
    while True:
        v = [field.random(rng) for _ in range(n + 1)]
        if any(v):
            return ProjPoint.make(v, field)


@dataclass(frozen=True)
class Increase:
    points: PointSet
    independent: bool
    attempts: int


def elementary_increase(S: PointSet, o: MPoint, i: int, rng, retries: int = 64) -> Increase:
    """Replace ``o`` by two points on a line through ``o_i`` in factor ``i``.

    Lines leaving ``<pi_i(S)>`` are tried first.  Returns the first linearly
    independent result, or the last attempt flagged dependent.
    """
    if o not in S:
        raise PreconditionError("o must belong to S")
    if e(S) > 0:
        raise PreconditionError("elementary increasing needs a linearly independent set")
    if len(S) >= S.shape.N:
        raise PreconditionError("#S = r + 1: the span is already everything")
    field = S.field
    n = S.shape.dims[i]
    oi = o.factors[i]
    proj_i = set(S.factor(i))
    span_i = LinearSubspace.span([f.coords for f in proj_i], field, n + 1)
    last = None
    for attempt in range(1, retries + 1):
        w = _random_proj_point(n, field, rng)
        if w == oi:
            continue
        if span_i.rank <= n and span_i.contains(w.coords) and attempt <= retries // 2:
            continue
        # points lam*o_i + w, plus w itself, avoiding pi_i(S)
        cands = [w] + [ProjPoint.make([field.add(field.mul(lam, x), y) for x, y in zip(oi.coords, w.coords)], field)
                       for lam in (field.random(rng) for _ in range(8))]
        cands = [c for c in dict.fromkeys(cands) if c not in proj_i]
        if len(cands) < 2:
            continue
        o1, o2 = rng.sample(cands, 2)
        new = S.with_points([p for p in S if p != o] + [o.replace(i, o1), o.replace(i, o2)])
        last = Increase(new, e(new) == 0, attempt)
        if last.independent:
            return last
    if last is None:
        raise FieldTooSmallError("no line through o_i has two points off pi_i(S)")
    return last


def elementary_decrease(S: PointSet, q: Sequence[Scalar], a: MPoint, b: MPoint, i: int) -> PointSet:
    """Merge the aligned pair ``a, b`` into one point ``o`` on their line.

    ``o`` is chosen so that ``q`` stays in the span.
    """
    field = S.field
    if a not in S or b not in S or a == b:
        raise PreconditionError("a and b must be distinct points of S")
    if a.forget(i) != b.forget(i):
        raise PreconditionError(f"a and b do not differ only in factor {i}")
    q = [field.canon(x) for x in q]
    rest = S.without(a, b)
    rows = list(rest.embedded)
    if rows and LinearSubspace.span(rows, field, S.shape.N).contains(q):
        return rest
    if not rows and not any(q):
        return rest
    va = segre_embed(S.shape, a, field)
    vb = segre_embed(S.shape, b, field)
    x = solve(transpose(rows + [va, vb]), q, field)
    if x is None:
        raise PreconditionError("q is not in the span of nu(S)")
    alpha, beta = x[-2], x[-1]
    oi = [field.add(field.mul(alpha, u), field.mul(beta, v))
          for u, v in zip(a.factors[i].coords, b.factors[i].coords)]
    o = a.replace(i, ProjPoint.make(oi, field))
    return rest.with_points(list(rest) + [o])


@dataclass(frozen=True)
class Projection:
    image: PointSet
    injective: bool
    forms: Tuple[Tuple[Scalar, ...], ...]


def linear_project(S: PointSet, i: int, V: LinearSubspace) -> Projection:
    """Project factor ``i`` from the linear subspace ``V`` of its coordinates."""
    field = S.field
    n = S.shape.dims[i]
    if V.ambient != n + 1:
        raise ShapeError(f"center must live in K^{n + 1}")
    if not (0 <= V.proj_dim <= n - 2):
        raise PreconditionError(f"center dimension {V.proj_dim} not in [0, {n - 2}]")
    forms = nullspace(list(V.basis), field, n + 1)
    forms = [tuple(f) for f in forms]
    images = []
    for pt in S.points:
        c = pt.factors[i].coords
        y = [field.canon(sum(a * b for a, b in zip(f, c))) for f in forms]
        if not any(y):
            raise CenterHitError(f"{pt!r} has its factor {i} inside the center")
        images.append(pt.replace(i, ProjPoint.make(y, field)))
    shape = Shape(S.shape.dims[:i] + (n - V.proj_dim - 1,) + S.shape.dims[i + 1:])
    distinct = set(images)
    return Projection(PointSet(shape, field, distinct), len(distinct) == len(images), tuple(forms))


def points_of(shape: Shape, field: FieldSpec) -> List[MPoint]:
    """All of Y(F_p) in lexicographic order."""
    if not field.is_prime:
        raise UnsupportedFieldError("Y(Q) is infinite")
    per = [projective_points(n, field) for n in shape.dims]
    return [MPoint(f) for f in itertools.product(*per)]


@dataclass(frozen=True)
class RankWitness:
    target_q: Tuple[Scalar, ...]
    rank: Optional[int]
    witnesses: Tuple[PointSet, ...]
    cap: int


def x_rank(q: Sequence[Scalar], shape: Shape, field: FieldSpec, cap: int = 3) -> RankWitness:
    """X-rank of ``q`` by exhaustive search, with all minimal witnesses."""
    if not field.is_prime:
        raise UnsupportedFieldError("x_rank enumerates X(F_p); rationals are not supported")
    if len(q) != shape.N:
        raise ShapeError(f"q must have {shape.N} coordinates")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    qn = normalize_vector(q, field)
    pts = points_of(shape, field)
    vecs = [segre_embed(shape, p, field) for p in pts]
    found = [j for j, v in enumerate(vecs) if v == qn]
    if found:
        return RankWitness(qn, 1, tuple(PointSet(shape, field, [pts[j]]) for j in found), cap)
    for size in range(2, cap + 1):
        wit = []
        for idx in itertools.combinations(range(len(pts)), size):
            rows = [vecs[j] for j in idx]
            rk = rank(rows, field, shape.N)
            if rk == size and rank(rows + [qn], field, shape.N) == rk:
                wit.append(PointSet(shape, field, [pts[j] for j in idx]))
        if wit:
            return RankWitness(qn, size, tuple(wit), cap)
    return RankWitness(qn, None, (), cap)


def irredundantly_spans(q: Sequence[Scalar], A: PointSet) -> bool:
    _require_nonempty(A)
    field, N = A.field, A.shape.N
    q = [field.canon(x) for x in q]

    def inside(rows):
        if not rows:
            return not any(q)
        return rank(list(rows) + [q], field, N) == rank(rows, field, N)

    rows = list(A.embedded)
    if not inside(rows):
        return False
    return not any(inside(rows[:j] + rows[j + 1:]) for j in range(len(rows)))


def circuit_partition_point(S: PointSet, A: PointSet) -> Tuple[Scalar, ...]:
    """The single point of ``<nu(A)> ∩ <nu(S - A)>``."""
    if not set(A).issubset(S.points) or not len(A) or len(A) == len(S):
        raise PreconditionError("A must be a nonempty proper subset of S")
    B = S.without(*A)
    field, N = S.field, S.shape.N
    inter = span_intersect(LinearSubspace.span(A.embedded, field, N),
                           LinearSubspace.span(B.embedded, field, N))
    if inter.proj_dim != 0:
        raise PreconditionError(
            f"spans meet in projective dimension {inter.proj_dim}; S is not a circuit")
    return inter.point()


@dataclass(frozen=True)
class DivisorCheck:
    precondition_ok: bool
    hypothesis_holds: Optional[bool]
    conclusion_holds: Optional[bool]
    reason: str = ""

    @property
    def violated(self) -> bool:
        return bool(self.precondition_ok and self.hypothesis_holds and not self.conclusion_holds)


def hyperplane_divisor(S: PointSet, i: int, H: Sequence[Scalar]) -> List[MPoint]:
    """Points of S on the pullback of the hyperplane ``H . x = 0`` of factor i."""
    field = S.field
    return [p for p in S.points if not field.canon(sum(a * b for a, b in zip(H, p.factors[i].coords)))]


def check_divisor_separation(q: Sequence[Scalar], A: PointSet, B: PointSet, i: int,
                    H: Sequence[Scalar]) -> DivisorCheck:
    """Check divisor separation on one instance with ``D = pi_i^{-1}(H)``."""
    if A == B:
        return DivisorCheck(False, None, None, "A equals B")
    if len(H) != A.shape.dims[i] + 1 or not any(A.field.canon(h) for h in H):
        return DivisorCheck(False, None, None, "H is not a hyperplane of factor i")
    if not len(A) or not len(B) or not irredundantly_spans(q, A) or not irredundantly_spans(q, B):
        return DivisorCheck(False, None, None, "A or B does not irredundantly span q")
    union = A.with_points(set(A) | set(B))
    on_D = set(hyperplane_divisor(union, i, H))
    residual = union.without(*on_D)
    if len(residual):
        h1 = defect_pattern(residual, epsilon_hat(A.shape.k, i)) if A.shape.k > 1 else \
            max(0, len(residual) - 1)
    else:
        h1 = 0
    hyp = h1 == 0
    concl = set(A) - on_D == set(B) - on_D
    return DivisorCheck(True, hyp, concl)


def act(S: PointSet, mats: Sequence, perm: Optional[Sequence[int]] = None) -> PointSet:
    """Apply ``(g_1, ..., g_k)`` factor-wise, then permute factors by ``perm``.

    ``perm[j]`` is the old index of the new factor ``j``; permuted factors
    must have equal dimension.
    """
    field = S.field
    k = S.shape.k
    perm = list(range(k)) if perm is None else list(perm)
    if sorted(perm) != list(range(k)) or any(S.shape.dims[perm[j]] != S.shape.dims[j] for j in range(k)):
        raise ShapeError("factor permutation must preserve dimensions")
    out = []
    for pt in S.points:
        facs = []
        for g, f in zip(mats, pt.factors):
            facs.append(ProjPoint.make([sum(a * b for a, b in zip(row, f.coords)) for row in g], field))
        out.append(MPoint(tuple(facs[perm[j]] for j in range(k))))
    return PointSet(S.shape, field, out)
