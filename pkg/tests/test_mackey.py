import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from comack.change import (ambient_to_sub, change_of_group, induce, inflate, iota, restrict,
                           transport)
from comack.groups import GroupError, build_group, quotient_group, subgroup_as_group
from comack.mackey import (MackeyFunctor, augmentation_kernel, check_convex, convex_functor,
                           direct_sum, dual_functor, fixed_point_functor,
                           hom_dim, hom_space, is_isomorphic, over_functor, perm_module,
                           random_functor, simple_functor, sub_quotient, tau_functor,
                           trivial_module, under_functor, verify_axioms, zero_functor,
                           zero_morphism, GModule)


def subgroup_of_order(G, n, normal=None, cyclic=None):
    L = G.lattice
    for s in range(len(L)):
        if L.orders[s] != n:
            continue
        if normal is not None and L.is_normal(s) != normal:
            continue
        if cyclic is not None:
            H, _ = subgroup_as_group(G, s)
            if any(H.element_order(g) == n for g in range(H.order)) != cyclic:
                continue
        return s
    raise LookupError


def augmentation(G):
    """The nonzero morphism FP_{kG} -> S_1."""
    P = fixed_point_functor(perm_module(G, 0))
    (f,) = hom_space(P, simple_functor(G, 0))
    return f


def test_perm_module_examples():
    G = build_group("C2^2")
    assert perm_module(G, G.lattice.whole).dim == 1
    assert perm_module(G, 0).dim == 4
    V = perm_module(G, 1)
    assert V.dim == 2
    V.validate()
    D = build_group("D8")
    for s in range(len(D.lattice)):
        assert perm_module(D, s).dim == 8 // D.lattice.orders[s]


def test_fixed_point_examples():
    G = build_group("C2")
    F = fixed_point_functor(trivial_module(G))
    assert F.dims == [1, 1]
    assert not F.t(0, 1).any() and F.r(0, 1).tolist() == [[1]]
    assert fixed_point_functor(perm_module(G, 0)).dims == [2, 1]
    Z = fixed_point_functor(GModule(G, 2, 0, [np.zeros((0, 0), np.uint8)]))
    assert Z.dims == [0, 0]


def test_fixed_point_cover_of_s1():
    G = build_group("C2")
    P = fixed_point_functor(perm_module(G, 0))
    assert [hom_dim(P, simple_functor(G, s)) for s in range(2)] == [1, 0]


def test_simple_examples():
    G = build_group("C2^2")
    assert simple_functor(G, 0).dims == [1, 0, 0, 0, 0]
    assert simple_functor(G, 4).dims == [0, 0, 0, 0, 1]
    D = build_group("D8")
    L = D.lattice
    refl = [s for s in range(len(L)) if L.orders[s] == 2 and not L.is_normal(s)]
    S = simple_functor(D, refl[0])
    assert sum(S.dims) == 2
    assert all(S.dims[s] == 1 for s in L.classes[L.class_of[refl[0]]])


def test_convex_examples():
    G = build_group("C2^2")
    L = G.lattice
    M = convex_functor(G, {L.class_of[0], L.class_of[1]})
    assert M.dims == [1, 1, 0, 0, 0]
    assert M.t(0, 1).tolist() == [[0]] and M.r(0, 1).tolist() == [[1]]
    assert is_isomorphic(M, over_functor(G, 1, 0))
    allc = convex_functor(G, set(range(len(L.classes))))
    assert is_isomorphic(allc, fixed_point_functor(trivial_module(G)))
    assert is_isomorphic(convex_functor(G, {L.class_of[L.whole]}), simple_functor(G, L.whole))
    with pytest.raises(ValueError):
        convex_functor(G, {L.class_of[0], L.class_of[L.whole]})
    with pytest.raises(ValueError):
        check_convex(L, [True, False, False, False, True])


def test_tau_examples():
    G = build_group("C9")
    S1 = simple_functor(G, 0)
    T0, _, _ = tau_functor(G, [0])
    assert hom_dim(T0, S1) == 2
    T, inc, proj = tau_functor(G, [1])
    assert hom_dim(T, S1) == 1
    inc.check()
    proj.check()
    assert verify_axioms(T)
    with pytest.raises(ValueError):
        tau_functor(build_group("C2^2"), [1, 0])


def test_dual_examples():
    for spec in ["C2^2", "D8", "C3^2"]:
        G = build_group(spec)
        for q in G.lattice.class_reps:
            S = simple_functor(G, q)
            assert is_isomorphic(dual_functor(S), S)
    G = build_group("C2^2")
    assert dual_functor(over_functor(G, 1, 0)).to_json() == under_functor(G, 0, 1).to_json()
    assert not is_isomorphic(over_functor(G, 1, 0), under_functor(G, 0, 1))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["C4", "C2^2", "D8", "C9"]), st.integers(0, 2**32 - 1))
def test_double_dual(spec, seed):
    M = random_functor(build_group(spec), np.random.default_rng(seed))
    assert dual_functor(dual_functor(M)).to_json() == M.to_json()


def test_hom_examples():
    G = build_group("C2^2")
    L = G.lattice
    for q in range(len(L)):
        assert hom_dim(simple_functor(G, q), simple_functor(G, q)) == 1
        for r in range(len(L)):
            if r != q:
                assert hom_dim(simple_functor(G, q), simple_functor(G, r)) == 0
    targets = [simple_functor(G, r) for r in range(len(L))] + [fixed_point_functor(trivial_module(G))]
    for q in range(len(L)):
        P = fixed_point_functor(perm_module(G, q))
        for M in targets:
            assert hom_dim(P, M) == M.dims[q]
    with pytest.raises(GroupError):
        hom_dim(simple_functor(G, 0), simple_functor(build_group("C4"), 0))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["C4", "C2^2", "D8", "C3^2"]), st.integers(0, 2**32 - 1))
def test_hom_from_fp_perm(spec, seed):
    G = build_group(spec)
    rng = np.random.default_rng(seed)
    M = random_functor(G, rng)
    q = int(rng.choice(G.lattice.class_reps))
    assert hom_dim(fixed_point_functor(perm_module(G, q)), M) == M.dims[q]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["C4", "C2^2", "D8", "C9"]), st.integers(0, 2**32 - 1))
def test_hom_basis_elements_are_morphisms(spec, seed):
    G = build_group(spec)
    rng = np.random.default_rng(seed)
    M, N = random_functor(G, rng), random_functor(G, rng)
    basis = hom_space(M, N)
    assert len(basis) == hom_dim(M, N)
    for f in basis:
        f.check()


def test_kernels_of_augmentation():
    G = build_group("C2")
    K, inc = sub_quotient(augmentation(G), "kernel")
    assert is_isomorphic(K, fixed_point_functor(trivial_module(G)))
    inc.check()
    for spec in ["C4", "C2^2", "D8", "C3"]:
        G = build_group(spec)
        K, inc = sub_quotient(augmentation(G), "kernel")
        assert verify_axioms(K)
        assert is_isomorphic(K, fixed_point_functor(augmentation_kernel(G)))


def test_image_cokernel():
    G = build_group("C2^2")
    P = fixed_point_functor(perm_module(G, 0))
    f = zero_morphism(P, simple_functor(G, 0))
    I, _ = sub_quotient(f, "image")
    assert I.total_dim == 0
    C, proj = sub_quotient(augmentation(G), "cokernel")
    assert C.total_dim == 0
    I, _ = sub_quotient(augmentation(G), "image")
    assert I.dims == [1, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        sub_quotient(f, "coimage")


def corrupt(M, key):
    d = M.to_dict()
    m = np.array(d["transfers"][key])
    m[0, 0] = (m[0, 0] + 1) % M.p
    d["transfers"][key] = m.tolist()
    return MackeyFunctor.from_dict(d, M.group)


def test_axioms_detect_corrupted_transfer():
    G = build_group("C4")
    M = fixed_point_functor(trivial_module(G))
    assert verify_axioms(M).ok
    bad = verify_axioms(corrupt(M, "0,1"))
    assert not bad.ok
    assert "t" in bad.first or "cohomolog" in bad.first
    assert len(verify_axioms(corrupt(M, "0,1"), stop_at_first=True).failures) == 1


def test_zero_functor_is_sum_identity():
    G = build_group("D8")
    M = over_functor(G, 1, 0)
    assert direct_sum(M, zero_functor(G)).to_json() == M.to_json()


def test_json_roundtrip():
    G = build_group("D8")
    M = fixed_point_functor(perm_module(G, 2))
    assert MackeyFunctor.from_json(M.to_json(), G).to_json() == M.to_json()
    with pytest.raises(ValueError):
        MackeyFunctor.from_json(M.to_json(), build_group("Q8"))


# ---- change of group ------------------------------------------------------

def test_ind_example():
    G = build_group("C2^2")
    H, _ = subgroup_as_group(G, 1)
    I = induce(simple_functor(H, 0), G, 1)
    assert I.dims == [2, 0, 1, 1, 0]
    assert verify_axioms(I)


@pytest.mark.parametrize("spec", ["C2^2", "D8", "C3^2"])
def test_iota_central(spec):
    G = build_group(spec)
    L = G.lattice
    Z = next(s for s in range(len(L)) if L.orders[s] == G.p and L.is_normal(s)
             and all(G.mult[a, b] == G.mult[b, a] for a in L.elements[s] for b in range(G.order)))
    Q, _ = quotient_group(G, Z)
    M = iota(simple_functor(Q, 0), G, Z)
    assert is_isomorphic(M, over_functor(G, Z, 0))


def test_res_of_simple():
    D = build_group("D8")
    L = D.lattice
    refl = next(s for s in range(len(L)) if L.orders[s] == 2 and not L.is_normal(s))
    conjs = L.classes[L.class_of[refl]]
    V = next(s for s in range(len(L)) if L.orders[s] == 4 and all(L.inclusion[c, s] for c in conjs))
    H, _ = subgroup_as_group(D, V)
    to_h = ambient_to_sub(D, V)
    R = restrict(simple_functor(D, refl), V)
    expect = direct_sum(*[simple_functor(H, to_h[c]) for c in conjs])
    assert is_isomorphic(R, expect)


def test_res_of_over_functor_elemab():
    G = build_group("C2^3")
    L = G.lattice
    X = 1
    for Hs in range(len(L)):
        if not L.inclusion[X, Hs] or L.orders[Hs] == 2:
            continue
        H, _ = subgroup_as_group(G, Hs)
        to_h = ambient_to_sub(G, Hs)
        R = restrict(over_functor(G, X, 0), Hs)
        assert is_isomorphic(R, over_functor(H, to_h[X], 0))


def test_inflate_and_transport():
    G = build_group("D8")
    Z = 1  # the center
    Q, _ = quotient_group(G, Z)
    rng = np.random.default_rng(3)
    for _ in range(5):
        M = random_functor(Q, rng)
        I = inflate(M, G, Z)
        assert verify_axioms(I)
        assert I.dims[0] == 0 and I.dims[Z] == M.dims[0]
    C4 = build_group("C4")
    M = fixed_point_functor(perm_module(C4, 1))
    f = np.array([C4.inv[g] for g in range(4)])
    T = transport(M, f, C4)
    assert T.dims == M.dims and verify_axioms(T)
    with pytest.raises(GroupError):
        transport(M, np.array([0, 0, 1, 2]), C4)


def test_change_of_group_dispatch():
    G = build_group("C2^2")
    M = simple_functor(G, 0)
    assert change_of_group(M, "res", 1).dims == [1, 0]
    with pytest.raises(ValueError):
        change_of_group(M, "coinduce", 1)
    with pytest.raises(GroupError):
        iota(M, G, 1)


@pytest.mark.parametrize("spec", ["C4", "C2^2", "D8", "C9", "C3^2"])
def test_adjunction_and_duality(spec):
    from comack.suites import adjunction_checks
    checks = adjunction_checks(build_group(spec), np.random.default_rng(7), instances=8)
    assert [c for c in checks if c[1] != c[2]] == []


@pytest.mark.parametrize("spec", ["C2", "C4", "C2^2", "D8", "Q8", "C9", "C3^2"])
def test_constructions_pass_axioms(spec):
    G = build_group(spec)
    L = G.lattice
    rng = np.random.default_rng(11)
    for q in L.class_reps:
        assert verify_axioms(simple_functor(G, q))
        assert verify_axioms(fixed_point_functor(perm_module(G, q)))
        for r in range(len(L)):
            if L.inclusion[q, r]:
                from comack.mackey import sigma_functor
                S = sigma_functor(G, q, r)
                assert verify_axioms(S) and verify_axioms(dual_functor(S))
    for _ in range(6):
        assert verify_axioms(random_functor(G, rng))
