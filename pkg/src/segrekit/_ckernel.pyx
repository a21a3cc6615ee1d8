# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled subset search over GF(p).

Same contract and results as ``segrekit._pykernel.search``; see that module
for the pruning rules and the partition scheme.
"""

import numpy as np
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

ctypedef long long i64


cdef inline i64 _inv_mod(i64 a, i64 p) nogil:
    cdef i64 t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef inline int _reduce(i64* row, i64* basis, int* piv, int nb, int N, i64 p) nogil:
    """Reduce ``row`` against ``nb`` normalized rows; normalize, return pivot or -1."""
    cdef int t, x, pc
    cdef i64 c, inv
    cdef i64* b
    for t in range(nb):
        pc = piv[t]
        if pc < 0:
            continue
        c = row[pc]
        if c != 0:
            c = p - c
            b = basis + t * N
            for x in range(pc, N):
                row[x] = (row[x] + c * b[x]) % p
    for x in range(N):
        if row[x] != 0:
            if row[x] != 1:
                inv = _inv_mod(row[x], p)
                for t in range(x, N):
                    row[t] = (row[t] * inv) % p
            return x
    return -1


cdef int _rank_of(const i64* src, int stride, int col, int width, int* ids, int cnt,
                  i64 p, i64* tmp, int* piv) nogil:
    cdef int t, x, r = 0
    for t in range(cnt):
        for x in range(width):
            tmp[t * width + x] = src[ids[t] * stride + col + x]
        piv[t] = _reduce(tmp + t * width, tmp, piv, t, width, p)
        if piv[t] >= 0:
            r += 1
    return r


cdef class _Search:
    cdef const i64* vecs
    cdef const i64* fac
    cdef const unsigned char* conflict
    cdef int n, N, s, F, k
    cdef i64 p
    cdef int* off
    cdef int split, worker, workers, min_rank, max_rank
    cdef bint circuit, nondeg, minimal, collect
    cdef i64* rows
    cdef int* piv
    cdef int* idx
    cdef int* ids
    cdef int* tpiv
    cdef i64* tmp
    cdef public list matches
    cdef i64* hist
    cdef public long long leaves

    def __cinit__(self):
        self.rows = NULL
        self.piv = NULL
        self.idx = NULL
        self.ids = NULL
        self.tpiv = NULL
        self.tmp = NULL
        self.off = NULL
        self.hist = NULL

    def __dealloc__(self):
        free(self.rows)
        free(self.piv)
        free(self.idx)
        free(self.ids)
        free(self.tpiv)
        free(self.tmp)
        free(self.off)
        free(self.hist)

    cdef bint _accept(self, int rank):
        cdef int j, t, c, i, w
        self.leaves += 1
        if rank < self.min_rank or rank > self.max_rank:
            return False
        if self.circuit:
            if rank != self.s - 1:
                return False
            for j in range(self.s - 1):
                c = 0
                for t in range(self.s):
                    if t != j:
                        self.ids[c] = self.idx[t]
                        c += 1
                if _rank_of(self.vecs, self.N, 0, self.N, self.ids, c, self.p, self.tmp, self.tpiv) != self.s - 1:
                    return False
        if self.nondeg:
            for i in range(self.k):
                w = self.off[i + 1] - self.off[i]
                if _rank_of(self.fac, self.F, self.off[i], w, self.idx, self.s, self.p, self.tmp, self.tpiv) != w:
                    return False
        return True

    cdef void _record(self, int rank):
        cdef int t
        self.hist[rank] += 1
        if self.collect:
            self.matches.append(tuple([self.idx[t] for t in range(self.s)]))

    cdef void _dfs(self, int d, int start, int rank):
        cdef int j, t, pc, new_rank, last
        cdef bint bad
        cdef i64* row = self.rows + d * self.N
        last = self.n - (self.s - d)
        for j in range(start, last + 1):
            if d == self.split and j % self.workers != self.worker:
                continue
            if self.minimal:
                bad = False
                for t in range(d):
                    if self.conflict[self.idx[t] * self.n + j]:
                        bad = True
                        break
                if bad:
                    continue
            self.idx[d] = j
            memcpy(row, self.vecs + j * self.N, self.N * sizeof(i64))
            pc = _reduce(row, self.rows, self.piv, d, self.N, self.p)
            self.piv[d] = pc
            new_rank = rank + (1 if pc >= 0 else 0)
            if d == self.s - 1:
                if self._accept(new_rank):
                    self._record(new_rank)
                continue
            if new_rank > self.max_rank or new_rank + (self.s - d - 1) < self.min_rank:
                continue
            if self.circuit and pc < 0:
                continue
            self._dfs(d + 1, j + 1, new_rank)

    def run(self, bint fix_first):
        cdef int pc, r0
        if fix_first:
            self.idx[0] = 0
            memcpy(self.rows, self.vecs, self.N * sizeof(i64))
            pc = _reduce(self.rows, self.rows, self.piv, 0, self.N, self.p)
            self.piv[0] = pc
            r0 = 1 if pc >= 0 else 0
            if self.s == 1:
                if self._accept(r0):
                    self._record(r0)
            elif r0 <= self.max_rank and r0 + self.s - 1 >= self.min_rank:
                self._dfs(1, 1, r0)
        else:
            self._dfs(0, 0, 0)


def search(vecs, p, s, fac, fac_off, conflict, fix_first, worker, workers,
           min_rank, max_rank, circuit, nondegenerate, minimal, collect):
    """See ``segrekit._pykernel.search``."""
    cdef const i64[:, ::1] V = np.ascontiguousarray(vecs, dtype=np.longlong)
    cdef const i64[:, ::1] Fm = np.ascontiguousarray(fac, dtype=np.longlong)
    cdef const unsigned char[:, ::1] C
    cdef _Search st = _Search()
    cdef int i, n = V.shape[0], N = V.shape[1]
    offs = [int(x) for x in fac_off]
    st.matches = []
    st.leaves = 0
    if s < 1 or n < s:
        return [0] * (s + 1), [], 0
    if nondegenerate and any(offs[i + 1] - offs[i] > s for i in range(len(offs) - 1)):
        return [0] * (s + 1), [], 0
    if circuit:
        max_rank = min(max_rank, s - 1)
    if minimal:
        C = np.ascontiguousarray(conflict, dtype=np.uint8)
        st.conflict = &C[0, 0]
    else:
        st.conflict = NULL
    st.vecs = &V[0, 0]
    st.fac = &Fm[0, 0]
    st.n = n
    st.N = N
    st.s = s
    st.F = Fm.shape[1]
    st.k = len(offs) - 1
    st.p = p
    st.off = <int*> malloc((st.k + 1) * sizeof(int))
    for i in range(st.k + 1):
        st.off[i] = offs[i]
    st.split = 1 if fix_first else 0
    st.worker = worker
    st.workers = workers
    st.min_rank = min_rank
    st.max_rank = max_rank
    st.circuit = circuit
    st.nondeg = nondegenerate
    st.minimal = minimal
    st.collect = collect
    width = max(N, st.F)
    st.rows = <i64*> malloc(s * N * sizeof(i64))
    st.piv = <int*> malloc(s * sizeof(int))
    st.idx = <int*> malloc(s * sizeof(int))
    st.ids = <int*> malloc(s * sizeof(int))
    st.tpiv = <int*> malloc(s * sizeof(int))
    st.tmp = <i64*> malloc(s * width * sizeof(i64))
    st.hist = <i64*> malloc((s + 1) * sizeof(i64))
    for i in range(s + 1):
        st.hist[i] = 0
    if not (st.hist and st.rows and st.piv and st.idx and st.ids and st.tpiv and st.tmp and st.off):
        raise MemoryError()
    st.run(fix_first)
    return [int(st.hist[i]) for i in range(s + 1)], st.matches, int(st.leaves)
