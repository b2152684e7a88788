import itertools

import pytest
from hypothesis import given, strategies as st

from comack.formulas import (central_reduction_terms, factor_ext_recursion, flag_count_oracle,
                             min_ext_prediction, poincare_closed_form, reduce_ext_instance,
                             series_inverse_product, steinberg_dim)
from comack.groups import GroupError, build_group, nu_invariant
from comack.homological import ext_simple
from comack.suites import admissible_pairs


def brute_series(factors, n_max):
    """Coefficients of 1/prod(1 - a t^k ...) by expanding each geometric factor
    as a power series of (1 - f) and multiplying truncated polynomials."""
    out = [1] + [0] * n_max
    for f in factors:
        g = [-c for c in f[1:]]  # 1/f = sum (g(t))^j with g = 1 - f
        inv = [1] + [0] * n_max
        power = [1] + [0] * n_max
        for _ in range(n_max):
            nxt = [0] * (n_max + 1)
            for i, a in enumerate(power):
                for k, b in enumerate(g, start=1):
                    if a and i + k <= n_max:
                        nxt[i + k] += a * b
            power = nxt
            inv = [x + y for x, y in zip(inv, power)]
        out = [sum(out[i] * inv[n - i] for i in range(n + 1)) for n in range(n_max + 1)]
    return out


def test_closed_form_examples():
    assert poincare_closed_form("elemab2", 2, 2, 8).dims == [1, 0, 1, 0, 1, 0, 1, 0, 1]
    assert poincare_closed_form("elemab2", 2, 3, 8).dims == [1, 0, 4, 0, 13, 0, 40, 0, 121]
    assert poincare_closed_form("p3", 3, 2, 5).dims == [1, 2, 5, 10, 21, 42]
    assert not poincare_closed_form("p3", 3, 2, 5).conjectural
    assert poincare_closed_form("p3", 5, 2, 5).conjectural
    with pytest.raises(ValueError):
        poincare_closed_form("elemab2", 3, 2, 4)
    with pytest.raises(ValueError):
        poincare_closed_form("p3", 2, 2, 4)
    with pytest.raises(ValueError):
        poincare_closed_form("other", 2, 2, 4)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=1, max_size=3), min_size=1, max_size=3),
       st.integers(0, 12))
def test_series_matches_brute_expansion(tails, n_max):
    factors = [[1] + t for t in tails]
    assert series_inverse_product(factors, n_max) == brute_series(factors, n_max)


def test_elemab2_m4_large_coefficients():
    dims = poincare_closed_form("elemab2", 2, 4, 60).dims
    assert dims == brute_series([[1, 0, -1], [1, 0, -3], [1, 0, -7]], 60)
    assert dims[60] > 2 ** 63


def test_steinberg_examples():
    G = build_group("C2^3")
    s = steinberg_dim(G, G.lattice.whole, 0)
    assert (s.degree, s.value) == (3, 8)
    K = build_group("C3^2")
    s = steinberg_dim(K, K.lattice.whole, 0)
    assert (s.degree, s.value) == (2, 3)
    s = steinberg_dim(G, G.lattice.whole, G.lattice.whole)
    assert (s.degree, s.value) == (0, 1)
    with pytest.raises(GroupError):
        C4 = build_group("C4")
        steinberg_dim(C4, C4.lattice.whole, 0)


def test_flag_count_examples():
    K = build_group("C2^2")
    assert flag_count_oracle(K, K.lattice.whole, 0) == 2
    G = build_group("C2^3")
    assert flag_count_oracle(G, G.lattice.whole, 0) == 8
    assert flag_count_oracle(G, 1, 0) == 1


@pytest.mark.parametrize("spec", ["C2^2", "C2^3", "C3^2", "D8", "C4", "Q8"])
def test_flag_count_equals_steinberg(spec):
    G = build_group(spec)
    L = G.lattice
    for Q in range(len(L)):
        if not (L.is_elementary_abelian(Q) and L.is_normal(Q)):
            continue
        for H in L.subgroups_of(Q):
            assert flag_count_oracle(G, Q, H) == steinberg_dim(G, Q, H).value


def test_factor_ext_examples():
    K = build_group("C2^2")
    W = K.lattice.whole
    assert factor_ext_recursion(K, W, W, 2).dims[2] == 3
    assert factor_ext_recursion(K, 0, 0, 8).dims == ext_simple(K, 0, 0, 8)
    G = build_group("C2^3")
    assert factor_ext_recursion(G, G.lattice.whole, 0, 2).dims == [0, 0, 0]


@pytest.mark.parametrize("spec, n", [("C2^2", 6), ("C4", 6), ("C2^3", 4), ("C3^2", 4)])
def test_factor_ext_matches_resolution(spec, n):
    G = build_group(spec)
    for Q, R in admissible_pairs(G):
        assert factor_ext_recursion(G, Q, R, n).dims == ext_simple(G, Q, R, n), (Q, R)


def test_reduce_instance_examples():
    D = build_group("D8")
    L = D.lattice
    c4 = next(s for s in range(len(L)) if L.orders[s] == 4 and not L.is_elementary_abelian(s))
    refl = [s for s in range(len(L)) if L.orders[s] == 2 and not L.is_normal(s)]
    for R in refl:
        assert reduce_ext_instance(D, c4, R) == []
        assert all(x == 0 for x in ext_simple(D, c4, R, 5))
    K = build_group("C2^2")
    (inst,) = reduce_ext_instance(K, 1, 1)
    assert inst.group.order == 4
    C4 = build_group("C4")
    (inst,) = reduce_ext_instance(C4, 1, 1)
    assert inst.group.order == 4


@pytest.mark.parametrize("spec, n", [("D8", 4), ("C4", 5), ("C2^2", 5)])
def test_reduction_sum_identity(spec, n):
    G = build_group(spec)
    reps = G.lattice.class_reps
    for Q, R in itertools.product(reps, reps):
        total = [0] * (n + 1)
        for inst in reduce_ext_instance(G, Q, R):
            sub = ext_simple(inst.group, inst.Q_hat, inst.R_hat, n)
            total = [a + b for a, b in zip(total, sub)]
        assert total == ext_simple(G, Q, R, n), (Q, R)


def test_central_reduction_examples():
    C4 = build_group("C4")
    K, (Gb, Qb, Rb) = central_reduction_terms(C4, 1, 1, 1)
    assert K == [0] and Gb.order == 2
    V = build_group("C2^2")
    W = V.lattice.whole
    for Z in (1, 2, 3):
        K, _ = central_reduction_terms(V, W, W, Z)
        assert len(K) == 2
    with pytest.raises(GroupError):
        central_reduction_terms(V, W, W, W)


@pytest.mark.parametrize("spec, n", [("C4", 5), ("C2^2", 5), ("D8", 4), ("C9", 4), ("C2^3", 4)])
def test_central_identity(spec, n):
    G = build_group(spec)
    L = G.lattice
    center = [z for z in range(len(L)) if L.orders[z] == G.p
              and all(G.commutator(g, int(x)) == 0 for g in range(G.order) for x in L.elements[z])]
    for Z in center:
        for Q in L.class_reps:
            for R in L.class_reps:
                if not (L.leq(Z, Q) and L.leq(Z, R)):
                    continue
                K, (Gb, Qb, Rb) = central_reduction_terms(G, Q, R, Z)
                lhs = ext_simple(G, Q, R, n)
                quot = ext_simple(Gb, Qb, Rb, n)
                shifted = [0] * (n + 1)
                for X in K:
                    e = ext_simple(G, X, R, n - 1)
                    shifted = [a + b for a, b in zip(shifted, [0] + e)]
                assert lhs == [a + b for a, b in zip(shifted, quot)], (Z, Q, R)


def test_min_ext_examples():
    G = build_group("C2^3")
    m = min_ext_prediction(G, G.lattice.whole, 0)
    assert (m.degree, m.value) == (3, 8)
    D = build_group("D8")
    for q in D.lattice.class_reps:
        m = min_ext_prediction(D, q, q)
        assert (m.degree, m.value) == (0, 1)
    K = build_group("C3^2")
    m = min_ext_prediction(K, K.lattice.whole, 1)
    assert (m.degree, m.value) == (1, 1)


@pytest.mark.parametrize("spec, n", [("C2^2", 4), ("C4", 4), ("D8", 4), ("C3^2", 3), ("C2^3", 4)])
def test_ext_vanishes_below_nu(spec, n):
    G = build_group(spec)
    reps = G.lattice.class_reps
    for Q, R in itertools.product(reps, reps):
        dims = ext_simple(G, Q, R, n)
        nu = nu_invariant(G, R, Q)
        if not nu.finite:
            assert dims == [0] * (n + 1)
            continue
        v = int(nu.value)
        assert dims[:min(v, n + 1)] == [0] * min(v, n + 1)
        if v <= n:
            assert dims[v] == min_ext_prediction(G, Q, R).value
