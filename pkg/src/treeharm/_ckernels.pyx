# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures."""
import numpy as np


def prefix_lengths(long long level_size, ratios, x_anc, int limit):
    cdef const long long[:] rt = np.ascontiguousarray(ratios, dtype=np.int64)
    cdef const long long[:] xa = np.ascontiguousarray(x_anc, dtype=np.int64)
    out = np.empty(level_size, dtype=np.int64)
    cdef long long[:] o = out
    cdef long long k
    cdef int j
    for k in range(level_size):
        j = 0
        while j < limit and k // rt[j + 1] == xa[j + 1]:
            j += 1
        o[k] = j
    return out


def prefix_counts(long long level_size, ratios, x_anc, int limit):
    cdef const long long[:] rt = np.ascontiguousarray(ratios, dtype=np.int64)
    cdef const long long[:] xa = np.ascontiguousarray(x_anc, dtype=np.int64)
    counts = np.zeros(limit + 1, dtype=np.int64)
    cdef long long[:] c = counts
    cdef long long k
    cdef int j
    for k in range(level_size):
        j = 0
        while j < limit and k // rt[j + 1] == xa[j + 1]:
            j += 1
        c[j] += 1
    return counts


def pairwise_prefix(anc):
    cdef const long long[:, :] a = np.ascontiguousarray(anc, dtype=np.int64)
    cdef Py_ssize_t m = a.shape[0], width = a.shape[1]
    out = np.zeros((m, m), dtype=np.int64)
    cdef long long[:, :] o = out
    cdef Py_ssize_t p, q, t
    for p in range(m):
        o[p, p] = 0
        t = 1
        while t < width and a[p, t] >= 0:
            t += 1
        o[p, p] = t - 1
        for q in range(p + 1, m):
            t = 1
            while t < width and a[p, t] >= 0 and a[p, t] == a[q, t]:
                t += 1
            o[p, q] = t - 1
            o[q, p] = t - 1
    return out
