"""Numpy fallback for the compiled row-reduction kernels in _fpcore.pyx.

Same signatures and the same pivot order, so results are identical.
"""
import numpy as np


def rref_gf2(a, ncols):
    nr = a.shape[0]
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nr:
            break
        w = c >> 6
        bit = np.uint64(1 << (c & 63))
        hits = np.flatnonzero(a[r:, w] & bit)
        if not hits.size:
            continue
        i = r + hits[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        rows = np.flatnonzero(a[:, w] & bit)
        rows = rows[rows != r]
        if rows.size:
            a[rows, w:] ^= a[r, w:]
        pivots.append(c)
        r += 1
    return pivots


def rref_modp(a, p):
    nr, nc = a.shape
    r = 0
    pivots = []
    for c in range(nc):
        if r == nr:
            break
        hits = np.flatnonzero(a[r:, c])
        if not hits.size:
            continue
        i = r + hits[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        iv = pow(int(a[r, c]), -1, p)
        if iv != 1:
            a[r, c:] = (a[r, c:].astype(np.int32) * iv) % p
        rows = np.flatnonzero(a[:, c])
        rows = rows[rows != r]
        if rows.size:
            f = (p - a[rows, c].astype(np.int32))[:, None]
            a[rows, c:] = (a[rows, c:] + f * a[r, c:].astype(np.int32)) % p
        pivots.append(c)
        r += 1
    return pivots
