"""Pure-Python subset search over GF(p).

Reference twin of the compiled ``_ckernel`` module; both expose ``search``
with the same signature and results.

Subsets of ``range(n)`` of size ``s`` are visited in lexicographic order by
depth-first search.  The echelon form of each prefix is kept incrementally,
so extending a prefix by one point costs one vector reduction.  Branches are
cut as soon as a hereditary filter fails:

* ``circuit``: every proper prefix must be independent;
* ``minimal``: no two chosen points may conflict (``conflict[a][b]``);
* rank bounds: the prefix rank never decreases and grows by at most one per
  added point.

Partitioning: with ``fix_first`` the first index is pinned to 0 and the
second index is split round-robin (``idx % workers == worker``); otherwise
the first index is split.
"""

from __future__ import annotations


def _reduce(v, basis, p):
    """Reduce ``v`` against normalized echelon rows; returns (row, pivot)."""
    v = list(v)
    for pc, row in basis:
        c = v[pc]
        if c:
            c = p - c
            for x in range(pc, len(v)):
                v[x] = (v[x] + c * row[x]) % p
    for x, c in enumerate(v):
        if c:
            inv = pow(c, -1, p)
            return [(y * inv) % p for y in v], x
    return v, -1


def _rank(vectors, p):
    basis = []
    for v in vectors:
        row, pc = _reduce(v, basis, p)
        if pc >= 0:
            basis.append((pc, row))
    return len(basis)


def search(vecs, p, s, fac, fac_off, conflict, fix_first, worker, workers,
           min_rank, max_rank, circuit, nondegenerate, minimal, collect):
    """Enumerate filtered ``s``-subsets of the rows of ``vecs``.

    Returns ``(hist, matches, leaves)``: ``hist[r]`` counts accepted subsets
    of rank ``r``; ``matches`` lists accepted index tuples when ``collect``;
    ``leaves`` counts full-size subsets reached after pruning.
    """
    vecs = [[int(x) for x in row] for row in vecs]
    n = len(vecs)
    fac = [[int(x) for x in row] for row in fac]
    off = [int(x) for x in fac_off]
    widths = [off[i + 1] - off[i] for i in range(len(off) - 1)]
    hist = [0] * (s + 1)
    matches = []
    leaves = 0
    if s < 1 or n < s:
        return hist, matches, leaves
    if nondegenerate and any(w > s for w in widths):
        return hist, matches, leaves
    if circuit:
        max_rank = min(max_rank, s - 1)
    split = 1 if fix_first else 0
    idx = [0] * s
    if conflict is not None and minimal:
        conflict = [[bool(x) for x in row] for row in conflict]

    def leaf(rank):
        nonlocal leaves
        leaves += 1
        if rank < min_rank or rank > max_rank:
            return
        if circuit:
            if rank != s - 1:
                return
            for j in range(s - 1):
                if _rank([vecs[idx[t]] for t in range(s) if t != j], p) != s - 1:
                    return
        if nondegenerate:
            for i, w in enumerate(widths):
                if _rank([fac[idx[t]][off[i]:off[i + 1]] for t in range(s)], p) != w:
                    return
        hist[rank] += 1
        if collect:
            matches.append(tuple(idx))

    def dfs(d, start, basis):
        rank = len(basis)
        for j in range(start, n - (s - d) + 1):
            if d == split and split < s and j % workers != worker:
                continue
            if minimal and any(conflict[idx[t]][j] for t in range(d)):
                continue
            idx[d] = j
            row, pc = _reduce(vecs[j], basis, p)
            new_rank = rank + (pc >= 0)
            if new_rank > max_rank or new_rank + (s - d - 1) < min_rank:
                if d == s - 1:
                    leaf(new_rank)
                continue
            if d == s - 1:
                leaf(new_rank)
                continue
            if circuit and pc < 0:
                continue
            dfs(d + 1, j + 1, basis + [(pc, row)] if pc >= 0 else basis)

    if fix_first:
        if s == 1:
            idx[0] = 0
            row, pc = _reduce(vecs[0], [], p)
            leaf(int(pc >= 0))
        else:
            idx[0] = 0
            row, pc = _reduce(vecs[0], [], p)
            r0 = int(pc >= 0)
            if r0 <= max_rank and r0 + s - 1 >= min_rank:
                dfs(1, 1, [(pc, row)] if pc >= 0 else [])
    else:
        dfs(0, 0, [])
    return hist, matches, leaves
