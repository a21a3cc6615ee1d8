"""Projective points and Möbius (PGL2) fitting.

P^1 convention: the affine parameter ``t`` is the point ``(t : 1)`` and
infinity is ``(1 : 0)``.  Every stored point is normalized so its first
nonzero coordinate is 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import DegeneracyError, ShapeError
from .field import FieldSpec, Scalar
from .linalg import det, matvec, normalize_vector

Matrix2 = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]

INF = "inf"


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: Tuple[Scalar, ...]

    @classmethod
    def make(cls, coords: Sequence, field: FieldSpec) -> "ProjPoint":
        if len(coords) < 2:
            raise ShapeError("a projective point needs at least two coordinates")
        return cls(normalize_vector(coords, field))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __repr__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def p1(t, field: FieldSpec) -> ProjPoint:
    """The point ``(t : 1)`` of P^1, or ``(1 : 0)`` for ``t == INF``."""
    if t == INF:
        return ProjPoint((field.one, field.zero))
    return ProjPoint.make((t, 1), field)


def projective_points(n: int, field: FieldSpec) -> List[ProjPoint]:
    """All points of P^n(F_p) in lexicographic order of normalized coordinates."""
    p = field.p
    if not field.is_prime:
        raise ValueError("only finite fields have finitely many points")
    out = []
    for lead in range(n + 1):
        for tail in itertools.product(range(p), repeat=n - lead):
            out.append(ProjPoint((0,) * lead + (1,) + tail))
    out.sort()
    return out


def normalize_matrix(M, field: FieldSpec) -> Tuple[Tuple[Scalar, ...], ...]:
    """Scale a matrix so its first nonzero entry (row-major) is 1."""
    flat = normalize_vector([x for row in M for x in row], field)
    w = len(M[0])
    return tuple(tuple(flat[i:i + w]) for i in range(0, len(flat), w))


def apply_pgl2(M, pt: ProjPoint, field: FieldSpec) -> ProjPoint:
    return ProjPoint.make(matvec(M, pt.coords, field), field)


def _frame(pts: Sequence[ProjPoint], field: FieldSpec):
    """Matrix sending (1:0), (0:1), (1:1) to the three given points."""
    a, b, c = (pt.coords for pt in pts)
    d = field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0]))
    if not d:
        raise DegeneracyError("repeated point in triple")
    # c = alpha a + beta b by Cramer's rule
    dinv = field.inv(d)
    alpha = field.mul(field.sub(field.mul(c[0], b[1]), field.mul(c[1], b[0])), dinv)
    beta = field.mul(field.sub(field.mul(a[0], c[1]), field.mul(a[1], c[0])), dinv)
    if not alpha or not beta:
        raise DegeneracyError("repeated point in triple")
    return [[field.mul(alpha, a[0]), field.mul(beta, b[0])],
            [field.mul(alpha, a[1]), field.mul(beta, b[1])]]


def _inv2(M, field: FieldSpec):
    (a, b), (c, d) = M
    dinv = field.inv(field.sub(field.mul(a, d), field.mul(b, c)))
    return [[field.mul(d, dinv), field.mul(field.neg(b), dinv)],
            [field.mul(field.neg(c), dinv), field.mul(a, dinv)]]


def fit_pgl2(src: Sequence[ProjPoint], dst: Sequence[ProjPoint], field: FieldSpec) -> Matrix2:
    """The Möbius matrix sending ``src[j]`` to ``dst[j]`` for j = 0, 1, 2."""
    if len(src) != 3 or len(dst) != 3:
        raise ShapeError("fit_pgl2 takes exactly three points on each side")
    for pt in list(src) + list(dst):
        if len(pt) != 2:
            raise ShapeError("points must lie on P^1")
    Fs = _frame(src, field)
    Fd = _frame(dst, field)
    Fi = _inv2(Fs, field)
    M = [[field.canon(sum(Fd[i][k] * Fi[k][j] for k in range(2))) for j in range(2)] for i in range(2)]
    return normalize_matrix(M, field)


def projectively_equivalent(a: Sequence[ProjPoint], b: Sequence[ProjPoint],
                            field: FieldSpec) -> Optional[Matrix2]:
    """Möbius matrix sending ``a[j] -> b[j]`` for all j, or None."""
    if len(a) != len(b):
        raise ShapeError("tuples of different length")
    if len(a) < 3:
        raise ShapeError("need at least three points")
    M = fit_pgl2(a[:3], b[:3], field)
    for x, y in zip(a[3:], b[3:]):
        if apply_pgl2(M, x, field) != y:
            return None
    return M


def pgl2_elements(field: FieldSpec) -> List[Matrix2]:
    """All of PGL2(F_p), normalized, in lexicographic order."""
    p = field.p
    out = []
    for flat in itertools.product(range(p), repeat=4):
        a, b, c, d = flat
        if (a * d - b * c) % p == 0:
            continue
        M = ((a, b), (c, d))
        if normalize_matrix(M, field) == M:
            out.append(M)
    return out


def is_invertible(M, field: FieldSpec) -> bool:
    return bool(det(M, field))


def cross_ratio(a: ProjPoint, b: ProjPoint, c: ProjPoint, d: ProjPoint, field: FieldSpec):
    """Cross-ratio ``(a, b; c, d)`` of four points of P^1 as a point of P^1."""

    def br(x, y):
        return field.sub(field.mul(x.coords[0], y.coords[1]), field.mul(x.coords[1], y.coords[0]))

    num = field.mul(br(a, c), br(b, d))
    den = field.mul(br(a, d), br(b, c))
    return ProjPoint.make((num, den), field)


def iter_p1(field: FieldSpec) -> Iterator[ProjPoint]:
    return iter(projective_points(1, field))
