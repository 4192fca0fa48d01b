# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as ``_pykernels``."""

from libc.stdint cimport uint8_t, uint64_t, int64_t

NAME = "cython"


def combine_translates(const uint8_t[:, :, ::1] rh, const uint8_t[:, :, ::1] rf,
                       int q, uint64_t[:, ::1] out):
    cdef Py_ssize_t H = rh.shape[0], d = rh.shape[1], D = rh.shape[2]
    cdef Py_ssize_t F = rf.shape[0]
    cdef Py_ssize_t h, f, i, j, row
    cdef uint64_t acc, qq = q
    cdef unsigned int s
    cdef uint64_t[:, ::1] ph
    cdef uint64_t[:, ::1] pf
    if q == 2:
        import numpy as np
        ph = np.zeros((H, d), dtype=np.uint64)
        pf = np.zeros((F, d), dtype=np.uint64)
        with nogil:
            for h in range(H):
                for i in range(d):
                    acc = 0
                    for j in range(D):
                        acc = (acc << 1) | rh[h, i, j]
                    ph[h, i] = acc
            for f in range(F):
                for i in range(d):
                    acc = 0
                    for j in range(D):
                        acc = (acc << 1) | rf[f, i, j]
                    pf[f, i] = acc
            for h in range(H):
                row = h * F
                for f in range(F):
                    for i in range(d):
                        out[row + f, i] = ph[h, i] ^ pf[f, i]
        return out
    with nogil:
        for h in range(H):
            row = h * F
            for f in range(F):
                for i in range(d):
                    acc = 0
                    for j in range(D):
                        s = rh[h, i, j] + rf[f, i, j]
                        if s >= <unsigned int>q:
                            s -= q
                        acc = acc * qq + s
                    out[row + f, i] = acc
    return out


def prefix_counts(const uint64_t[:, ::1] codes, int q, int D, ks, int64_t[::1] counts):
    cdef Py_ssize_t N = codes.shape[0], d = codes.shape[1]
    cdef Py_ssize_t p, i
    cdef uint64_t key
    cdef uint64_t div[64]
    cdef uint64_t mul[64]
    cdef int shift[64]
    cdef int width[64]
    if d > 64:
        raise ValueError("at most 64 coordinates")
    cdef object base = q
    for i in range(d):
        width[i] = ks[i]
        shift[i] = D - width[i]
        div[i] = base ** (D - width[i])
        mul[i] = base ** width[i]
    counts[:] = 0
    with nogil:
        if q == 2:
            for p in range(N):
                key = 0
                for i in range(d):
                    if width[i]:
                        key = (key << width[i]) | (codes[p, i] >> shift[i])
                counts[key] += 1
        else:
            for p in range(N):
                key = 0
                for i in range(d):
                    if width[i]:
                        key = key * mul[i] + codes[p, i] / div[i]
                counts[key] += 1
    return counts
