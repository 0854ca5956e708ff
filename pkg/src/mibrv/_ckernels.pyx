# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled distance kernels: blocked pairwise Euclidean distances and
k-nearest / k-farthest mean reductions.

Same interface as mibrv._pykernels. Top-k selection uses an in-place
quickselect (no full sort); selected values are summed in ascending
order so results are exact under instance permutations, and means are
clamped into [min, max] of their summands. All heavy loops run with the
GIL released, so callers can fan bag pairs out over threads.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport qsort

cnp.import_array()

BACKEND_NAME = "cython"


cdef int _cmp_double(const void* pa, const void* pb) noexcept nogil:
    cdef double a = (<const double*> pa)[0]
    cdef double b = (<const double*> pb)[0]
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


cdef void _sort_ascending(double* v, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double key
    if n <= 32:
        for i in range(1, n):
            key = v[i]
            j = i - 1
            while j >= 0 and v[j] > key:
                v[j + 1] = v[j]
                j -= 1
            v[j + 1] = key
    else:
        qsort(v, <size_t> n, sizeof(double), &_cmp_double)


cdef void _nth_smallest(double* v, Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t kidx) noexcept nogil:
    # Hoare quickselect with median-of-three pivot: afterwards v[kidx] holds
    # the kidx-th smallest value, smaller-or-equal values on its left.
    cdef Py_ssize_t i, j, mid
    cdef double pivot, tmp
    while lo < hi:
        mid = lo + ((hi - lo) >> 1)
        if v[mid] < v[lo]:
            tmp = v[mid]; v[mid] = v[lo]; v[lo] = tmp
        if v[hi] < v[lo]:
            tmp = v[hi]; v[hi] = v[lo]; v[lo] = tmp
        if v[hi] < v[mid]:
            tmp = v[hi]; v[hi] = v[mid]; v[mid] = tmp
        pivot = v[mid]
        i = lo
        j = hi
        while i <= j:
            while v[i] < pivot:
                i += 1
            while v[j] > pivot:
                j -= 1
            if i <= j:
                tmp = v[i]; v[i] = v[j]; v[j] = tmp
                i += 1
                j -= 1
        if kidx <= j:
            hi = j
        elif kidx >= i:
            lo = i
        else:
            return


cdef double _mean_of_smallest(double* v, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    cdef double s = 0.0
    cdef double best
    cdef Py_ssize_t t
    if k <= 1:
        best = v[0]
        for t in range(1, n):
            if v[t] < best:
                best = v[t]
        return best
    if k > n:
        k = n
    if k < n:
        _nth_smallest(v, 0, n - 1, k - 1)
    _sort_ascending(v, k)
    for t in range(k):
        s += v[t]
    s = s / k
    if s < v[0]:
        s = v[0]
    elif s > v[k - 1]:
        s = v[k - 1]
    return s


cdef double _mean_of_largest(double* v, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    cdef double s = 0.0
    cdef double best
    cdef Py_ssize_t t, start
    if k <= 1:
        best = v[0]
        for t in range(1, n):
            if v[t] > best:
                best = v[t]
        return best
    if k > n:
        k = n
    start = n - k
    if start > 0:
        _nth_smallest(v, 0, n - 1, start)
    _sort_ascending(v + start, k)
    for t in range(start, n):
        s += v[t]
    s = s / k
    if s < v[start]:
        s = v[start]
    elif s > v[n - 1]:
        s = v[n - 1]
    return s


cdef void _row_dists(const double* a_row, const double* b, Py_ssize_t n, Py_ssize_t d,
                     double* out) noexcept nogil:
    cdef Py_ssize_t j, t
    cdef double s, diff
    cdef const double* b_row
    for j in range(n):
        b_row = b + j * d
        s = 0.0
        for t in range(d):
            diff = a_row[t] - b_row[t]
            s += diff * diff
        out[j] = sqrt(s)


cdef void _pair_table(const double* a, Py_ssize_t m, Py_ssize_t d,
                      const double* b, Py_ssize_t n, Py_ssize_t k,
                      double* row_buf, double* stat_small, double* stat_large,
                      double* out6) noexcept nogil:
    cdef Py_ssize_t i
    cdef double ssum = 0.0, lsum = 0.0, v
    for i in range(m):
        _row_dists(a + i * d, b, n, d, row_buf)
        stat_small[i] = _mean_of_smallest(row_buf, n, k)
        # selection permutes row_buf but leaves the multiset intact
        stat_large[i] = _mean_of_largest(row_buf, n, k)
    _sort_ascending(stat_small, m)
    _sort_ascending(stat_large, m)
    for i in range(m):
        ssum += stat_small[i]
        lsum += stat_large[i]
    v = ssum / m
    if v < stat_small[0]:
        v = stat_small[0]
    elif v > stat_small[m - 1]:
        v = stat_small[m - 1]
    out6[0] = stat_small[0]
    out6[1] = v
    out6[2] = stat_small[m - 1]
    v = lsum / m
    if v < stat_large[0]:
        v = stat_large[0]
    elif v > stat_large[m - 1]:
        v = stat_large[m - 1]
    out6[3] = stat_large[0]
    out6[4] = v
    out6[5] = stat_large[m - 1]


def cross_distance_matrix(const double[:, ::1] a, const double[:, ::1] b):
    """All pairwise Euclidean distances, shape (len(a), len(b))."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    if b.shape[1] != d:
        raise ValueError("dimensionality mismatch")
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    if m == 0 or n == 0:
        return out
    with nogil:
        for i in range(m):
            _row_dists(&a[i, 0], &b[0, 0], n, d, &o[i, 0])
    return out


def operator_table(const double[:, ::1] a, const double[:, ::1] b, Py_ssize_t k):
    """All six operator values for one bag pair, indexed by operator number - 1."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    if b.shape[1] != d:
        raise ValueError("dimensionality mismatch")
    if m < 1 or n < 1:
        raise ValueError("bags must be nonempty")
    if k < 1:
        raise ValueError("k must be >= 1")
    out = np.empty(6, dtype=np.float64)
    row_buf = np.empty(n, dtype=np.float64)
    stat_small = np.empty(m, dtype=np.float64)
    stat_large = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] rb = row_buf
    cdef double[::1] ss = stat_small
    cdef double[::1] sl = stat_large
    with nogil:
        _pair_table(&a[0, 0], m, d, &b[0, 0], n, k, &rb[0], &ss[0], &sl[0], &o[0])
    return out


def operator_table_block(const double[:, ::1] a, const double[:, ::1] refs,
                         const cnp.int64_t[::1] offsets, Py_ssize_t k):
    """operator_table of one bag against every reference, shape (R, 6)."""
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t d = a.shape[1]
    cdef Py_ssize_t n_refs = offsets.shape[0] - 1
    cdef Py_ssize_t r, n_r, max_n
    if refs.shape[1] != d:
        raise ValueError("dimensionality mismatch")
    if m < 1:
        raise ValueError("bags must be nonempty")
    if k < 1:
        raise ValueError("k must be >= 1")
    max_n = 0
    for r in range(n_refs):
        n_r = offsets[r + 1] - offsets[r]
        if n_r < 1:
            raise ValueError("reference bags must be nonempty")
        if n_r > max_n:
            max_n = n_r
    out = np.empty((n_refs, 6), dtype=np.float64)
    row_buf = np.empty(max_n, dtype=np.float64)
    stat_small = np.empty(m, dtype=np.float64)
    stat_large = np.empty(m, dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] rb = row_buf
    cdef double[::1] ss = stat_small
    cdef double[::1] sl = stat_large
    with nogil:
        for r in range(n_refs):
            n_r = offsets[r + 1] - offsets[r]
            _pair_table(&a[0, 0], m, d, &refs[offsets[r], 0], n_r, k,
                        &rb[0], &ss[0], &sl[0], &o[r, 0])
    return out
