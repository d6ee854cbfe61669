# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bitset clique search, switching-orbit reduction, Seidel batch fill.

Signatures and results match ``eqlines._pycore`` exactly.
"""
from itertools import permutations

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "cython"


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef struct Search:
    uint64_t adj[64]
    int best_size
    uint64_t best


cdef int color_bound(Search* s, uint64_t p) nogil:
    cdef int colors = 0
    cdef uint64_t q, bit
    cdef int v
    while p:
        colors += 1
        q = p
        while q:
            v = lowbit(q)
            bit = (<uint64_t>1) << v
            q &= ~bit
            q &= ~s.adj[v]
            p &= ~bit
    return colors


cdef void expand(Search* s, uint64_t r, int rsize, uint64_t p) nogil:
    cdef int v
    cdef uint64_t bit
    if rsize > s.best_size:
        s.best_size = rsize
        s.best = r
    while p:
        if rsize + popcount(p) <= s.best_size:
            return
        if rsize + color_bound(s, p) <= s.best_size:
            return
        v = lowbit(p)
        bit = (<uint64_t>1) << v
        expand(s, r | bit, rsize + 1, p & s.adj[v])
        p &= ~bit


def max_clique_bits(adj):
    """Lexicographically least maximum clique of a graph with at most 64 vertices."""
    cdef Search s
    cdef int n = len(adj)
    cdef int i
    cdef uint64_t full
    if n > 64:
        raise ValueError("compiled clique search supports at most 64 vertices")
    for i in range(n):
        s.adj[i] = <uint64_t>adj[i]
    s.best_size = 0
    s.best = 0
    full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else (((<uint64_t>1) << n) - 1)
    with nogil:
        expand(&s, 0, 0, full)
    return int(s.best)


def pair_index(int m):
    return [(i, j) for i in range(1, m) for j in range(i + 1, m)]


def seidel_fill(int m, codes):
    cdef cnp.ndarray[int64_t, ndim=1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef Py_ssize_t k = c.shape[0]
    cdef cnp.ndarray[double, ndim=3] out = np.empty((k, m, m), dtype=np.float64)
    cdef double[:, :, :] o = out
    cdef Py_ssize_t t
    cdef int i, j, b
    cdef int64_t code
    cdef double sgn
    with nogil:
        for t in range(k):
            code = c[t]
            for i in range(m):
                o[t, i, i] = 0.0
            for j in range(1, m):
                o[t, 0, j] = 1.0
                o[t, j, 0] = 1.0
            b = 0
            for i in range(1, m):
                for j in range(i + 1, m):
                    sgn = -1.0 if (code >> b) & 1 else 1.0
                    o[t, i, j] = sgn
                    o[t, j, i] = sgn
                    b += 1
    return out


def _perm_bitmaps(int m):
    pairs = pair_index(m)
    pos = {p: b for b, p in enumerate(pairs)}
    maps = []
    for perm in permutations(range(1, m)):
        sigma = (0,) + perm
        row = []
        for i, j in pairs:
            a, c = sigma[i], sigma[j]
            row.append(pos[(min(a, c), max(a, c))])
        maps.append(row)
    return np.array(maps, dtype=np.int64).reshape(len(maps), len(pairs))


def orbit_representatives(int m):
    """Least code of every orbit under relabelling vertices 1..m-1."""
    cdef int nbits = (m - 1) * (m - 2) // 2
    if nbits == 0:
        return np.zeros(1, dtype=np.int64)
    cdef int64_t total = (<int64_t>1) << nbits
    cdef cnp.ndarray[int64_t, ndim=2] maps = _perm_bitmaps(m)
    cdef int64_t[:, :] mp = maps
    cdef Py_ssize_t nperm = maps.shape[0]
    cdef uint8_t* seen = <uint8_t*>malloc(total)
    cdef int64_t code, img
    cdef Py_ssize_t p
    cdef int b
    reps = []
    if seen == NULL:
        raise MemoryError()
    try:
        for code in range(total):
            seen[code] = 0
        for code in range(total):
            if seen[code]:
                continue
            reps.append(code)
            with nogil:
                for p in range(nperm):
                    img = 0
                    for b in range(nbits):
                        if (code >> b) & 1:
                            img |= (<int64_t>1) << mp[p, b]
                    seen[img] = 1
    finally:
        free(seen)
    return np.array(reps, dtype=np.int64)
