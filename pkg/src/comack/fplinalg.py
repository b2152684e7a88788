"""Exact dense linear algebra over F_p.

Matrices are numpy uint8 arrays with entries in [0, p).  Row reduction runs in
the compiled kernel when it is built (comack._fpcore) and in a numpy fallback
otherwise; set COMACK_PURE_PYTHON=1 to force the fallback.  Over F_2 rows are
bit-packed into uint64 words.

Subspaces are kept as row bases in reduced row-echelon form, so coordinates of
a vector in such a basis are just its entries at the pivot columns.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _fpcore_py

if os.environ.get("COMACK_PURE_PYTHON"):
    _kernels = _fpcore_py
    BACKEND = "python"
else:
    try:
        from . import _fpcore as _kernels
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _kernels = _fpcore_py
        BACKEND = "python"


def use_backend(name):
    """Switch kernels at runtime ("compiled" or "python"); returns the old name."""
    global _kernels, BACKEND
    old = BACKEND
    if name == "python":
        _kernels = _fpcore_py
    elif name == "compiled":
        from . import _fpcore
        _kernels = _fpcore
    else:
        raise ValueError(name)
    BACKEND = name
    return old


def fp(a, p):
    """Coerce to a 2D uint8 array with entries reduced mod p."""
    a = np.asarray(a)
    if a.dtype != np.uint8 or (a.size and a.max() >= p):
        a = np.mod(a.astype(np.int64), p).astype(np.uint8)
    return a


def zeros(r, c):
    return np.zeros((r, c), dtype=np.uint8)


def identity(n):
    return np.eye(n, dtype=np.uint8)


def pack_gf2(a):
    """uint8 0/1 matrix -> uint64 words, little-endian bit order."""
    r, c = a.shape
    nw = max(1, (c + 63) // 64)
    b = np.packbits(a, axis=1, bitorder="little")
    out = np.zeros((r, nw * 8), dtype=np.uint8)
    out[:, :b.shape[1]] = b
    return np.ascontiguousarray(out).view(np.uint64)


def unpack_gf2(w, c):
    b = np.ascontiguousarray(w).view(np.uint8)
    return np.unpackbits(b, axis=1, bitorder="little", count=c) if b.shape[0] else np.zeros((0, c), np.uint8)


def rref(a, p):
    """Return (R, pivots): the nonzero rows of the RREF of a, and pivot columns."""
    a = fp(a, p)
    r, c = a.shape
    if r == 0 or c == 0:
        return zeros(0, c), []
    if p == 2:
        w = pack_gf2(a)
        piv = _kernels.rref_gf2(w, c)
        return unpack_gf2(w[:len(piv)], c), list(piv)
    a = np.ascontiguousarray(a.copy())
    piv = _kernels.rref_modp(a, p)
    return a[:len(piv)].copy(), list(piv)


def rank(a, p):
    return len(rref(a, p)[1])


def kernel_from_rref(R, pivots, ncols, p):
    """Rows spanning {x : R x = 0}, one per free column."""
    free = [j for j in range(ncols) if j not in set(pivots)]
    K = zeros(len(free), ncols)
    if free:
        K[np.arange(len(free)), free] = 1
        if pivots:
            K[:, pivots] = ((-R[:, free].astype(np.int64)) % p).T.astype(np.uint8)
    return K


def nullspace(a, p):
    """Basis (rows, RREF) of {x : a x = 0}."""
    a = fp(a, p)
    R, piv = rref(a, p)
    K = kernel_from_rref(R, piv, a.shape[1], p)
    return rref(K, p)[0] if len(K) else K


def row_space(a, p):
    return rref(a, p)[0]


def solve(a, b, p):
    """Solve a x = b for each column of b.

    Returns (x, ok): x has one column per right-hand side (free variables
    set to zero), ok is a bool array marking the consistent columns.
    """
    a = fp(a, p)
    b = fp(b, p)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError("dimension mismatch")
    R, piv = rref(np.hstack([a, b]), p)
    npiv = [c for c in piv if c < n]
    ra = len(npiv)
    ok = ~np.any(R[ra:, n:], axis=0) if len(R) > ra else np.ones(b.shape[1], bool)
    x = zeros(n, b.shape[1])
    if ra:
        x[npiv, :] = R[:ra, n:]
    x[:, ~ok] = 0
    if vec:
        return x[:, 0], bool(ok[0])
    return x, ok


def independent_rows(a, p):
    """Indices of the rows of a chosen greedily in order that form a basis of
    its row space."""
    a = fp(a, p)
    if a.shape[0] == 0:
        return []
    return rref(a.T, p)[1]


def reduce_mod(rows, R, pivots, p):
    """Reduce rows modulo the row space of an RREF basis R."""
    rows = fp(rows, p)
    if len(pivots) and rows.size:
        sub = matmul(rows[:, pivots], R, p)
        rows = ((rows.astype(np.int16) - sub) % p).astype(np.uint8)
    return rows


def coords(R, pivots, v):
    """Coordinates of rows v (assumed in the span) in the RREF basis R."""
    v = np.asarray(v)
    return v[..., pivots].astype(np.uint8)


def in_span(R, pivots, v, p):
    return not reduce_mod(np.atleast_2d(v), R, pivots, p).any()


def sum_spaces(p, *blocks):
    mats = [b for b in blocks if b is not None and b.shape[0]]
    if not mats:
        n = blocks[0].shape[1]
        return zeros(0, n), []
    return rref(np.vstack(mats), p)


_EXACT = 2.0 ** 52


def matmul(a, b, p):
    """(a @ b) mod p, exact.  Dense products go through float64 BLAS when
    every partial sum stays below 2^52, otherwise int64."""
    if sp.issparse(a) or sp.issparse(b):
        a = a if sp.issparse(a) else np.asarray(a, dtype=np.int64)
        b = b if sp.issparse(b) else np.asarray(b, dtype=np.int64)
        out = a @ b
        if sp.issparse(out):
            out = out.toarray()
        return np.mod(np.asarray(out), p).astype(np.uint8)
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < _EXACT:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(np.rint(out).astype(np.int64), p).astype(np.uint8)
    out = a.astype(np.int64) @ b.astype(np.int64)
    return np.mod(out, p).astype(np.uint8)


def is_invertible(a, p):
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(a, p):
    n = a.shape[0]
    x, ok = solve(a, identity(n), p)
    if not ok.all():
        raise ValueError("matrix is singular")
    return x


# ---- public value types -------------------------------------------------

@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple  # row-major residues

    @classmethod
    def from_array(cls, a, p):
        a = fp(np.atleast_2d(np.asarray(a)), p)
        return cls(p, a.shape[0], a.shape[1], tuple(int(x) for x in a.ravel()))

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        if any(not 0 <= x < self.p for x in self.entries):
            raise ValueError("entries must lie in [0, p)")

    def array(self):
        return np.array(self.entries, dtype=np.uint8).reshape(self.rows, self.cols)


@dataclass(frozen=True)
class FpSubspace:
    ambient_dim: int
    basis: FpMatrix

    @property
    def dim(self):
        return self.basis.rows

    def contains(self, v):
        B = self.basis.array()
        piv = [int(np.flatnonzero(r)[0]) for r in B]
        return in_span(B, piv, v, self.basis.p)


def reduce(A):
    """(rref, rank, kernel) of an FpMatrix."""
    a = A.array()
    R, piv = rref(a, A.p)
    K = nullspace(a, A.p)
    return (FpMatrix.from_array(R.reshape(len(piv), A.cols), A.p), len(piv),
            FpSubspace(A.cols, FpMatrix.from_array(K.reshape(-1, A.cols), A.p)))


def solve_fp(A, b):
    """Particular solution of A x = b (or None when inconsistent) and the
    kernel of A."""
    a = A.array()
    b = np.asarray(b)
    if b.shape[0] != A.rows:
        raise ValueError("dimension mismatch")
    x, ok = solve(a, b, A.p)
    K = nullspace(a, A.p)
    return (x if ok else None), FpSubspace(A.cols, FpMatrix.from_array(K.reshape(-1, A.cols), A.p))
