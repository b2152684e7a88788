import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comack import fplinalg as fl
from comack.fplinalg import FpMatrix, reduce, solve_fp

PRIMES = [2, 3, 5]


@st.composite
def matrices(draw, max_side=9):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    a = np.random.default_rng(seed).integers(0, p, size=(r, c))
    return p, a.astype(np.uint8)


def brute_kernel_size(a, p):
    c = a.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=c)
               if not (a.astype(np.int64) @ np.array(x)).__mod__(p).any())


def test_reduce_examples():
    R, r, K = reduce(FpMatrix.from_array(np.eye(3, dtype=int), 2))
    assert r == 3 and K.dim == 0
    R, r, K = reduce(FpMatrix.from_array(np.zeros((2, 5), dtype=int), 3))
    assert r == 0 and K.dim == 5
    R, r, K = reduce(FpMatrix.from_array([[1, 1], [1, 1]], 2))
    assert r == 1 and K.dim == 1
    assert K.basis.array().tolist() == [[1, 1]]
    assert R.array().tolist() == [[1, 1]]


def test_solve_examples():
    A = FpMatrix.from_array(np.eye(4, dtype=int), 5)
    x, K = solve_fp(A, np.array([1, 4, 0, 2]))
    assert x.tolist() == [1, 4, 0, 2] and K.dim == 0
    x, K = solve_fp(FpMatrix.from_array(np.zeros((2, 2), dtype=int), 3), np.array([1, 0]))
    assert x is None
    x, K = solve_fp(FpMatrix.from_array([[1, 1]], 2), np.array([1]))
    assert x.tolist() == [1, 0] and K.dim == 1
    with pytest.raises(ValueError):
        solve_fp(FpMatrix.from_array([[1, 1]], 2), np.array([1, 0]))


def test_fpmatrix_invariants():
    with pytest.raises(ValueError):
        FpMatrix(2, 1, 2, (0, 2))
    with pytest.raises(ValueError):
        FpMatrix(3, 2, 2, (0, 1, 2))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_transpose(pa):
    p, a = pa
    assert fl.rank(a, p) == fl.rank(a.T, p)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_rows_annihilated(pa):
    p, a = pa
    K = fl.nullspace(a, p)
    assert not fl.matmul(a, K.T, p).any()
    assert fl.rank(a, p) + len(K) == a.shape[1]


@settings(max_examples=60, deadline=None)
@given(matrices(max_side=5))
def test_kernel_size_brute(pa):
    p, a = pa
    assert p ** len(fl.nullspace(a, p)) == brute_kernel_size(a, p)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_idempotent_and_shape(pa):
    p, a = pa
    R, r, K = reduce(FpMatrix.from_array(a, p))
    R2, r2, _ = reduce(R) if R.rows else (R, 0, None)
    assert R2 == R and r2 == r
    B = R.array()
    piv = [int(np.flatnonzero(row)[0]) for row in B]
    assert piv == sorted(set(piv))
    assert all(B[i, c] == 1 and np.count_nonzero(B[:, c]) == 1 for i, c in enumerate(piv))


@settings(max_examples=100, deadline=None)
@given(matrices(), st.integers(0, 2**32 - 1))
def test_solve_random(pa, seed):
    p, a = pa
    if a.shape[0] == 0:
        return
    x0 = np.random.default_rng(seed).integers(0, p, size=a.shape[1])
    b = fl.matmul(a, x0[:, None], p)[:, 0]
    x, ok = fl.solve(a, b, p)
    assert ok and np.array_equal(fl.matmul(a, x[:, None], p)[:, 0], b)


@pytest.mark.skipif(fl.BACKEND != "compiled", reason="compiled kernel not built")
@settings(max_examples=80, deadline=None)
@given(matrices(max_side=40))
def test_backends_agree(pa):
    p, a = pa
    old = fl.use_backend("python")
    try:
        R1, p1 = fl.rref(a, p)
        fl.use_backend("compiled")
        R2, p2 = fl.rref(a, p)
    finally:
        fl.use_backend(old)
    assert np.array_equal(R1, R2) and p1 == p2


def test_gf2_packing_wide():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(70, 200)).astype(np.uint8)
    assert np.array_equal(fl.unpack_gf2(fl.pack_gf2(a), 200), a)
    K = fl.nullspace(a, 2)
    assert len(K) == 200 - fl.rank(a, 2) and not fl.matmul(a, K.T, 2).any()


def test_matmul_exact_long_inner():
    rng = np.random.default_rng(2)
    a = rng.integers(0, 251, size=(2, 80_000))
    b = rng.integers(0, 251, size=(a.shape[1], 2))
    expect = (a.astype(object) @ b.astype(object)) % 251
    assert fl.matmul(a, b, 251).tolist() == expect.tolist()


def test_inverse():
    a = np.array([[1, 2], [3, 4]])
    inv = fl.inverse(a, 5)
    assert fl.matmul(a, inv, 5).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        fl.inverse(np.array([[1, 1], [1, 1]]), 2)
