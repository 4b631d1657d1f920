# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels over packed uint64 rows.

Mirrors rbl._kernels_py: same functions, same results, bitsets packed as
little-endian uint64 word arrays (bit v lives in word v >> 6).
"""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    """
    static inline int rbl_popcll(unsigned long long x) { return __builtin_popcountll(x); }
    static inline int rbl_ctzll(unsigned long long x) { return __builtin_ctzll(x); }
    """
    int rbl_popcll(uint64_t x) nogil
    int rbl_ctzll(uint64_t x) nogil


cdef inline long long _row_and_pop(const uint64_t[:, ::1] rows, Py_ssize_t u,
                                   const uint64_t[::1] mask, Py_ssize_t w) nogil:
    cdef Py_ssize_t j
    cdef long long c = 0
    for j in range(w):
        c += rbl_popcll(rows[u, j] & mask[j])
    return c


def pair_count(const uint64_t[:, ::1] rows, const uint64_t[::1] xm, const uint64_t[::1] ym):
    cdef Py_ssize_t w = rows.shape[1]
    cdef Py_ssize_t j, u
    cdef uint64_t word
    cdef long long total = 0
    with nogil:
        for j in range(w):
            word = xm[j]
            while word:
                u = (j << 6) + rbl_ctzll(word)
                word &= word - 1
                total += _row_and_pop(rows, u, ym, w)
    return total


def degrees_into(const uint64_t[:, ::1] rows, const uint64_t[::1] srcm, const uint64_t[::1] tgtm):
    cdef Py_ssize_t w = rows.shape[1]
    cdef Py_ssize_t j, u
    cdef uint64_t word
    out = []
    for j in range(w):
        word = srcm[j]
        while word:
            u = (j << 6) + rbl_ctzll(word)
            word &= word - 1
            out.append((u, _row_and_pop(rows, u, tgtm, w)))
    return out


def sum_sq_degrees(const uint64_t[:, ::1] rows, const uint64_t[::1] xm, const uint64_t[::1] ym):
    cdef Py_ssize_t w = rows.shape[1]
    cdef Py_ssize_t j, z
    cdef uint64_t word
    cdef long long d
    cdef long long total = 0
    with nogil:
        for j in range(w):
            word = ym[j]
            while word:
                z = (j << 6) + rbl_ctzll(word)
                word &= word - 1
                d = _row_and_pop(rows, z, xm, w)
                total += d * d
    return total


def walk_sums(const uint64_t[:, ::1] rows, const uint64_t[::1] xm, const uint64_t[::1] ym, Py_ssize_t n):
    cdef int64_t[::1] deg = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t w = rows.shape[1]
    cdef Py_ssize_t j, jw, z, x
    cdef uint64_t word, rw
    cdef long long s, r
    with nogil:
        for j in range(w):
            word = ym[j]
            while word:
                z = (j << 6) + rbl_ctzll(word)
                word &= word - 1
                deg[z] = _row_and_pop(rows, z, xm, w)
    out = []
    for j in range(w):
        word = xm[j]
        while word:
            x = (j << 6) + rbl_ctzll(word)
            word &= word - 1
            s = 0
            r = 0
            with nogil:
                for jw in range(w):
                    rw = rows[x, jw] & ym[jw]
                    r += rbl_popcll(rw)
                    while rw:
                        s += deg[(jw << 6) + rbl_ctzll(rw)]
                        rw &= rw - 1
            out.append((x, s, r))
    return out
