# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled codeword sweep kernel; same contract as ``_pykernels.sweep_block``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, int64_t, uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil

cdef uint64_t HASH_PRIME = 2147483647ULL


def sweep_block(const uint8_t[::1] tr_tab, const int64_t[::1] log_tab,
                const int64_t[::1] exp_tab, const int64_t[::1] lmask,
                const int64_t[::1] coords, const uint64_t[:, ::1] hash_coef,
                Py_ssize_t a_lo, Py_ssize_t a_hi):
    cdef Py_ssize_t q = lmask.shape[0]
    cdef Py_ssize_t n = coords.shape[0]
    cdef Py_ssize_t na = a_hi - a_lo
    weights_arr = np.zeros(na * q, dtype=np.int64)
    fps_arr = np.zeros((na * q, 2), dtype=np.uint64)
    cdef int64_t[::1] weights = weights_arr
    cdef uint64_t[:, ::1] fps = fps_arr
    if n == 0:
        return weights_arr, fps_arr

    cdef uint8_t *va = <uint8_t *> malloc(n * sizeof(uint8_t))
    cdef uint64_t *d = <uint64_t *> malloc(n * sizeof(uint64_t))
    if va == NULL or d == NULL:
        free(va)
        free(d)
        raise MemoryError()

    cdef const uint64_t *c0 = &hash_coef[0, 0]
    cdef const uint64_t *c1 = &hash_coef[1, 0]
    cdef const uint64_t *c2 = &hash_coef[2, 0]
    cdef const uint64_t *c3 = &hash_coef[3, 0]
    cdef Py_ssize_t a, b, j, row
    cdef int64_t la, ld, w
    cdef uint64_t L, s, h0, h1, h2, h3
    cdef int64_t lee[4]
    lee[0] = 0
    lee[1] = 1
    lee[2] = 2
    lee[3] = 1

    with nogil:
        for j in range(n):
            d[j] = <uint64_t> coords[j]
        for a in range(a_lo, a_hi):
            la = log_tab[a]
            for j in range(n):
                ld = log_tab[coords[j]]
                if la < 0 or ld < 0:
                    va[j] = tr_tab[0]
                else:
                    va[j] = tr_tab[exp_tab[la + ld]]
            for b in range(q):
                L = <uint64_t> lmask[b]
                w = 0
                h0 = 0
                h1 = 0
                h2 = 0
                h3 = 0
                for j in range(n):
                    s = (va[j] + 2 * __builtin_parityll(L & d[j])) & 3
                    w += lee[s]
                    h0 += s * c0[j]
                    h1 += s * c1[j]
                    h2 += s * c2[j]
                    h3 += s * c3[j]
                row = (a - a_lo) * q + b
                weights[row] = w
                fps[row, 0] = ((h0 % HASH_PRIME) << 32) | (h1 % HASH_PRIME)
                fps[row, 1] = ((h2 % HASH_PRIME) << 32) | (h3 % HASH_PRIME)
    free(va)
    free(d)
    return weights_arr, fps_arr
