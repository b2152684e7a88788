# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""In-place row reduction over F_2 (bit-packed rows) and F_p (uint8 entries)."""
cimport cython
from libc.stdint cimport uint64_t, uint8_t


def rref_gf2(uint64_t[:, ::1] a, Py_ssize_t ncols):
    """Reduce packed rows to RREF in place; return the pivot columns."""
    cdef Py_ssize_t nr = a.shape[0], nw = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, w, piv
    cdef uint64_t bit, tmp
    pivots = []
    for c in range(ncols):
        if r == nr:
            break
        w = c >> 6
        bit = (<uint64_t>1) << (c & 63)
        piv = -1
        for i in range(r, nr):
            if a[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(w, nw):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        for i in range(nr):
            if i != r and (a[i, w] & bit):
                for j in range(w, nw):
                    a[i, j] ^= a[r, j]
        pivots.append(c)
        r += 1
    return pivots


def rref_modp(uint8_t[:, ::1] a, int p):
    """Reduce an F_p matrix (entries in [0, p)) to RREF in place."""
    cdef Py_ssize_t nr = a.shape[0], nc = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int f, m, iv
    cdef uint8_t tmp
    cdef int inv[256]
    for f in range(1, p):
        for m in range(1, p):
            if (f * m) % p == 1:
                inv[f] = m
    pivots = []
    for c in range(nc):
        if r == nr:
            break
        piv = -1
        for i in range(r, nr):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, nc):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        iv = inv[a[r, c]]
        if iv != 1:
            for j in range(c, nc):
                a[r, j] = <uint8_t>((a[r, j] * iv) % p)
        for i in range(nr):
            if i != r and a[i, c] != 0:
                m = p - a[i, c]
                for j in range(c, nc):
                    if a[r, j]:
                        a[i, j] = <uint8_t>((a[i, j] + m * a[r, j]) % p)
        pivots.append(c)
        r += 1
    return pivots
