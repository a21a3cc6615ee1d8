"""Independent reference computations used to check segrekit.

Nothing here imports segrekit's linear algebra: ranks come from sympy's
DomainMatrix, embeddings from itertools, and subset facts from brute force.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix


def _domain(p):
    return QQ if p is None else GF(p)


def rank_oracle(rows, p=None, ncols=None):
    """Rank of an integer/Fraction matrix over GF(p) (or Q when p is None)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    K = _domain(p)
    if p is None:
        data = [[K.convert(Fraction(x).numerator) / K.convert(Fraction(x).denominator) for x in r]
                for r in rows]
    else:
        data = [[K(int(Fraction(x).numerator) * pow(Fraction(x).denominator, -1, p)) for x in r]
                for r in rows]
    return DomainMatrix(data, (len(rows), ncols or len(rows[0])), K).rank()


def kron_oracle(factors):
    """Kronecker product of coordinate vectors, first factor most significant."""
    return [prod(c) for c in itertools.product(*factors)]


def field_p(S):
    return S.field.p if S.field.is_prime else None


def rows_of(S):
    return [kron_oracle([f.coords for f in pt.factors]) for pt in S.points]


def e_oracle(S, points=None):
    pts = list(S.points) if points is None else list(points)
    if not pts:
        return 0
    rows = [kron_oracle([f.coords for f in pt.factors]) for pt in pts]
    return len(pts) - rank_oracle(rows, field_p(S), S.shape.N)


def circuit_oracle(S):
    """Dependent with every proper subset independent, by full subset scan."""
    pts = list(S.points)
    if e_oracle(S) == 0:
        return False
    for r in range(1, len(pts)):
        for sub in itertools.combinations(pts, r):
            if e_oracle(S, sub):
                return False
    return True


def kernel_oracle(S):
    """Intersection of all subsets T with e(T) = e(S); also returns the minimal ones."""
    pts = list(S.points)
    target = e_oracle(S)
    good = [frozenset(T) for r in range(len(pts) + 1) for T in itertools.combinations(pts, r)
            if e_oracle(S, T) == target]
    inter = frozenset(pts)
    for T in good:
        inter &= T
    minimal = [T for T in good if not any(U < T for U in good)]
    return inter, minimal


def aligned_oracle(a, b):
    return sum(x != y for x, y in zip(a.factors, b.factors)) == 1


def minimal_oracle(S):
    return not any(aligned_oracle(a, b) for a, b in itertools.combinations(S.points, 2))


def nondegenerate_oracle(S):
    p = field_p(S)
    return all(rank_oracle([pt.factors[i].coords for pt in S.points], p, n + 1) == n + 1
               for i, n in enumerate(S.shape.dims))


def count_sets_oracle(points, s, pred):
    return sum(1 for sub in itertools.combinations(points, s) if pred(sub))
