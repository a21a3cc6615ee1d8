"""Exact linear algebra over a :class:`FieldSpec`.

Matrices are sequences of rows; entries are canonical scalars.  Elimination
always pivots on the first nonzero column, taking the topmost candidate row,
so every result is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import ShapeError
from .field import FieldSpec, Scalar

Row = Tuple[Scalar, ...]


def _check_rect(M, ncols: Optional[int] = None) -> int:
    width = ncols
    for row in M:
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ShapeError(f"ragged matrix: row of length {len(row)}, expected {width}")
    if width is None:
        raise ShapeError("matrix without rows needs an explicit column count")
    if width < 1:
        raise ShapeError("matrix needs at least one column")
    return width


def _rank_mod_p(rows: List[List[int]], p: int) -> int:
    rank = 0
    basis: List[Tuple[int, List[int]]] = []
    for v in rows:
        v = [x % p for x in v]
        for col, b in basis:
            c = v[col]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        for col, c in enumerate(v):
            if c:
                inv = pow(c, -1, p)
                basis.append((col, [(x * inv) % p for x in v]))
                rank += 1
                break
    return rank


def rank(M: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: Optional[int] = None) -> int:
    """Exact rank of ``M``."""
    if not M:
        if ncols is not None and ncols < 1:
            raise ShapeError("matrix needs at least one column")
        return 0
    _check_rect(M, ncols)
    if field.is_prime:
        return _rank_mod_p([[field.canon(x) for x in row] for row in M], field.p)
    return len(rref(M, field)[1])


def rref(M: Sequence[Sequence[Scalar]], field: FieldSpec,
         ncols: Optional[int] = None) -> Tuple[List[List[Scalar]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if not M:
        return [], []
    n = _check_rect(M, ncols)
    A = [[field.canon(x) for x in r] for r in M]
    pivots: List[int] = []
    r = 0
    p = field.p
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        if p:
            A[r] = [(x * inv) % p for x in A[r]]
        else:
            A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                if p:
                    A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
                else:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace(M: Sequence[Sequence[Scalar]], field: FieldSpec, ncols: Optional[int] = None) -> List[List[Scalar]]:
    """Basis of ``{x : M x = 0}``, one basis vector per free column."""
    if not M:
        if ncols is None:
            raise ShapeError("empty matrix needs an explicit column count")
        n = ncols
        R, pivots = [], []
    else:
        n = _check_rect(M, ncols)
        R, pivots = rref(M, field, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for row, pc in zip(R, pivots):
            x[pc] = field.neg(row[f])
        basis.append(x)
    return basis


def solve(M: Sequence[Sequence[Scalar]], b: Sequence[Scalar], field: FieldSpec) -> Optional[List[Scalar]]:
    """One solution ``x`` of ``M x = b`` (free variables set to zero), or None."""
    n = _check_rect(M)
    if len(b) != len(M):
        raise ShapeError("right-hand side length does not match row count")
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    R, pivots = rref(aug, field, n + 1)
    if n in pivots:
        return None
    x = [field.zero] * n
    for row, pc in zip(R, pivots):
        x[pc] = row[n]
    return x


def transpose(M: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    return [list(c) for c in zip(*M)]


def matmul(A, B, field: FieldSpec) -> List[List[Scalar]]:
    Bt = transpose(B)
    out = []
    for row in A:
        out.append([field.canon(sum(x * y for x, y in zip(row, col))) for col in Bt])
    return out


def matvec(A, v, field: FieldSpec) -> List[Scalar]:
    return [field.canon(sum(x * y for x, y in zip(row, v))) for row in A]


def det(M, field: FieldSpec) -> Scalar:
    n = len(M)
    A = [list(r) for r in M]
    d = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = field.neg(d)
        d = field.mul(d, A[c][c])
        inv = field.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = field.mul(A[i][c], inv)
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


def inverse(M, field: FieldSpec) -> List[List[Scalar]]:
    n = len(M)
    aug = [list(r) + [field.one if i == j else field.zero for j in range(n)] for i, r in enumerate(M)]
    R, pivots = rref(aug, field, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ShapeError("matrix is singular")
    return [row[n:] for row in R]


def normalize_vector(v: Sequence[Scalar], field: FieldSpec) -> Tuple[Scalar, ...]:
    """Scale so the first nonzero entry is 1.  Raises on the zero vector."""
    v = [field.canon(x) for x in v]
    for x in v:
        if x:
            inv = field.inv(x)
            return tuple(field.mul(y, inv) for y in v)
    raise ValueError("zero vector has no projective class")


def kron(a: Sequence[Scalar], b: Sequence[Scalar], field: FieldSpec) -> List[Scalar]:
    """Kronecker product, ``a`` most significant."""
    if field.is_prime:
        p = field.p
        return [(x * y) % p for x in a for y in b]
    return [x * y for x in a for y in b]


@dataclass(frozen=True)
class LinearSubspace:
    """A subspace of K^N stored by its reduced echelon basis."""

    field: FieldSpec
    ambient: int
    basis: Tuple[Row, ...]

    @classmethod
    def span(cls, vectors, field: FieldSpec, ambient: Optional[int] = None) -> "LinearSubspace":
        vectors = [list(v) for v in vectors]
        if ambient is None:
            if not vectors:
                raise ShapeError("span of nothing needs an ambient dimension")
            ambient = len(vectors[0])
        for v in vectors:
            if len(v) != ambient:
                raise ShapeError(f"vector of length {len(v)} in K^{ambient}")
        R, _ = rref([[field.canon(x) for x in v] for v in vectors], field, ambient)
        return cls(field, ambient, tuple(tuple(r) for r in R))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def proj_dim(self) -> int:
        return len(self.basis) - 1

    def contains(self, v) -> bool:
        if len(v) != self.ambient:
            raise ShapeError("vector outside the ambient space")
        if not self.basis:
            return not any(v)
        return rank(list(self.basis) + [list(v)], self.field) == self.rank

    def _check(self, other: "LinearSubspace"):
        if other.ambient != self.ambient or other.field != self.field:
            raise ShapeError("subspaces live in different ambient spaces")

    def __add__(self, other: "LinearSubspace") -> "LinearSubspace":
        self._check(other)
        return LinearSubspace.span(list(self.basis) + list(other.basis), self.field, self.ambient)

    def intersect(self, other: "LinearSubspace") -> "LinearSubspace":
        return span_intersect(self, other)

    def point(self) -> Tuple[Scalar, ...]:
        """The unique projective point of a rank-one subspace, normalized."""
        if self.rank != 1:
            raise ValueError(f"subspace has projective dimension {self.proj_dim}, not 0")
        return normalize_vector(self.basis[0], self.field)


def span_intersect(A: LinearSubspace, B: LinearSubspace) -> LinearSubspace:
    """``A ∩ B`` via the kernel of ``[A; B]^T``."""
    A._check(B)
    field = A.field
    if not A.basis or not B.basis:
        return LinearSubspace(field, A.ambient, ())
    stacked = list(A.basis) + list(B.basis)
    # coefficient vectors (a, b) with a.A + b.B = 0
    rel = nullspace(transpose(stacked), field, len(stacked))
    na = len(A.basis)
    vecs = []
    for c in rel:
        a = c[:na]
        vecs.append([field.canon(sum(ai * row[j] for ai, row in zip(a, A.basis))) for j in range(A.ambient)])
    return LinearSubspace.span(vecs, field, A.ambient)
