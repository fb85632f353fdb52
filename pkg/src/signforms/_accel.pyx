# cython: language_level=3
"""Compiled enumeration kernel.

best_sign_pattern walks sign vectors in Gray-code order so each step flips a
single coordinate and updates the contraction in O(n).  Values are exact when
M is integer-valued (all arithmetic stays on integers representable in
float64), which is the only regime the exact-norm driver uses.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def best_sign_pattern(double[:, ::1] M, unsigned long long t0, unsigned long long t1):
    """Maximize sum_j |(M^T s)_j| over patterns s with index in [t0, t1).

    Pattern indexing: coordinate j of pattern(t) is +1 iff bit (m-1-j) of t
    is set.  This chunk visits {pattern(gray(t)) : t0 <= t < t1}; unions of
    chunk results over a full index partition cover every pattern once.
    Returns (value, int8 pattern), ties resolved toward the
    lexicographically smallest pattern (-1 before +1) within the chunk.
    """
    cdef Py_ssize_t m = M.shape[0]
    cdef Py_ssize_t n = M.shape[1]
    if t1 <= t0:
        raise ValueError("empty pattern range")
    if m < 1 or m > 62:
        raise ValueError("pattern length out of range")

    cdef cnp.ndarray[cnp.int8_t, ndim=1] s_arr = np.empty(m, dtype=np.int8)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] best_arr = np.empty(m, dtype=np.int8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_arr = np.zeros(n, dtype=np.float64)
    cdef signed char[::1] s = s_arr
    cdef signed char[::1] best_s = best_arr
    cdef double[::1] y = y_arr

    cdef unsigned long long g0 = t0 ^ (t0 >> 1)
    cdef unsigned long long t, u
    cdef Py_ssize_t j, c, b
    cdef double val, best_val, two_s
    cdef bint smaller

    for j in range(m):
        if (g0 >> (m - 1 - j)) & 1:
            s[j] = 1
        else:
            s[j] = -1
    for c in range(m):
        two_s = s[c]
        for j in range(n):
            y[j] += two_s * M[c, j]
    val = 0.0
    for j in range(n):
        val += y[j] if y[j] >= 0.0 else -y[j]
    best_val = val
    best_arr[:] = s_arr[:]

    for t in range(t0 + 1, t1):
        u = t
        b = 0
        while (u & 1) == 0:
            u >>= 1
            b += 1
        c = m - 1 - b
        s[c] = -s[c]
        two_s = 2.0 * s[c]
        val = 0.0
        for j in range(n):
            y[j] += two_s * M[c, j]
            val += y[j] if y[j] >= 0.0 else -y[j]
        if val > best_val:
            best_val = val
            best_arr[:] = s_arr[:]
        elif val == best_val:
            smaller = False
            for j in range(m):
                if s[j] != best_s[j]:
                    smaller = s[j] < best_s[j]
                    break
            if smaller:
                best_arr[:] = s_arr[:]

    return best_val, best_arr
