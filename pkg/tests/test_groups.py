import itertools

import numpy as np
import pytest

from comack.groups import (GroupError, build_group, complements, double_cosets, is_cyclic,
                           nu_invariant, quotient_group, subgroup_as_group, group_from_table)


def brute_subgroups(G):
    """All subgroups by closure of every subset of size <= 3 of generators."""
    found = set()
    for k in range(0, 4):
        for gens in itertools.combinations(range(G.order), k):
            S = {0}
            frontier = set(gens)
            while frontier:
                S |= frontier
                frontier = {int(G.mult[a, b]) for a in S for b in S} - S
            found.add(frozenset(S))
    return found


def test_klein():
    G = build_group("C2^2")
    assert G.order == 4 and G.p == 2
    assert sum(1 for g in range(1, 4) if G.mult[g, g] == 0) == 3


def test_c9():
    G = build_group("C9")
    assert G.order == 9 and G.p == 3 and is_cyclic(G)


def test_d8_against_presentation():
    # brute force: words in r, s with r^4 = s^2 = (rs)^2 = 1, elements r^i s^j
    def mul(a, b):
        (i, j), (k, l) = a, b
        return ((i + (-k if j else k)) % 4, (j + l) % 2)
    els = [(i, j) for j in range(2) for i in range(4)]
    table = {(a, b): mul(a, b) for a in els for b in els}
    G = build_group("D8")
    assert G.order == 8 and len(G.generator_set) == 2
    # same isomorphism type: 5 involutions, 2 elements of order 4, nonabelian
    inv = lambda mult, n: sum(1 for g in range(1, n) if mult(g, g) == 0)
    assert inv(lambda a, b: G.mult[a, b], 8) == 5
    assert sum(1 for a in els if a != (0, 0) and table[(a, a)] == (0, 0)) == 5
    assert sum(1 for g in range(8) if G.element_order(g) == 4) == 2
    assert not G.is_abelian()


def test_bad_specs():
    with pytest.raises(GroupError):
        build_group("C6")
    with pytest.raises(GroupError):
        build_group("C2xC3")
    with pytest.raises(GroupError):
        build_group("C2^8")
    with pytest.raises(GroupError):
        build_group("S3")


def test_table_file(tmp_path):
    G = build_group("C4")
    path = tmp_path / "c4.txt"
    path.write_text(f"{G.order}\n" + "\n".join(" ".join(map(str, row)) for row in G.mult))
    H = group_from_table(str(path))
    assert H.order == 4 and is_cyclic(H)


@pytest.mark.parametrize("spec, n_sub, n_cls", [("C2^2", 5, 5), ("C2^3", 16, 16), ("D8", 10, 8),
                                                ("C3^2", 6, 6), ("Q8", 6, 6)])
def test_lattice_counts(spec, n_sub, n_cls):
    G = build_group(spec)
    L = G.lattice
    assert len(L) == n_sub
    assert len(L.classes) == n_cls
    assert {frozenset(int(x) for x in e) for e in L.elements} == brute_subgroups(G)


@pytest.mark.parametrize("spec", ["C2^2", "C4", "D8", "C3^2", "C2^3", "Q8"])
def test_lattice_invariants(spec):
    G = build_group(spec)
    L = G.lattice
    for s in range(len(L)):
        els = set(int(x) for x in L.elements[s])
        assert all(int(G.mult[a, b]) in els for a in els for b in els)
        # Frattini quotient is elementary abelian
        F = L.frattini[s]
        fe = set(int(x) for x in L.elements[F])
        assert fe <= els
        for a in els:
            assert int(G.mult[a, a]) in fe if G.p == 2 else int(G.power(a, G.p)) in fe
            for b in els:
                assert G.commutator(a, b) in fe
    for h, k in L.covers:
        assert L.orders[k] == G.p * L.orders[h]
    # class reps are the smallest bitmask
    for k, cl in enumerate(L.classes):
        assert L.class_reps[k] == min(cl, key=lambda s: sum(1 << int(x) for x in L.elements[s]))


def test_double_cosets():
    G = build_group("C2^2")
    x = 1
    assert len(double_cosets(G, x, x)) == 2
    assert len(double_cosets(G, 0, 0)) == 4
    assert len(double_cosets(G, G.lattice.whole, G.lattice.whole)) == 1


@pytest.mark.parametrize("spec", ["D8", "C2^3", "C3^2"])
def test_double_coset_sizes_sum(spec):
    G = build_group(spec)
    L = G.lattice
    for H in range(len(L)):
        for K in range(len(L)):
            tot = 0
            for g in double_cosets(G, H, K):
                hgk = {int(G.mult[G.mult[h, g], k]) for h in L.elements[H] for k in L.elements[K]}
                tot += len(hgk)
            assert tot == G.order


def test_complements():
    G = build_group("C2^2")
    L = G.lattice
    assert len(complements(L, L.whole, 1)) == 2
    assert complements(L, 1, 1) == [0]
    C4 = build_group("C4")
    assert complements(C4.lattice, C4.lattice.whole, 1) == []


@pytest.mark.parametrize("spec", ["C2^3", "D8", "C3^2"])
def test_complements_scan(spec):
    G = build_group(spec)
    L = G.lattice
    for N in range(len(L)):
        if not L.is_normal(N):
            continue
        for H in range(len(L)):
            if not L.inclusion[N, H]:
                continue
            scan = [X for X in range(len(L)) if L.inclusion[X, H]
                    and L.orders[X] * L.orders[N] == L.orders[H] and L.meet(X, N) == 0]
            assert sorted(complements(L, H, N)) == sorted(scan)


def test_quotients():
    Q, proj = quotient_group(build_group("C4"), 1)
    assert Q.order == 2
    G = build_group("C2^3")
    Q, proj = quotient_group(G, 1)
    assert Q.order == 4 and all(Q.mult[g, g] == 0 for g in range(4))
    D = build_group("D8")
    Z = next(s for s in range(len(D.lattice)) if D.lattice.orders[s] == 2 and D.lattice.is_normal(s))
    Q, proj = quotient_group(D, Z)
    assert Q.order == 4 and Q.is_abelian() and all(Q.mult[g, g] == 0 for g in range(4))
    # projection is a homomorphism with kernel Z
    assert all(proj[D.mult[a, b]] == Q.mult[proj[a], proj[b]] for a in range(8) for b in range(8))
    assert sorted(np.flatnonzero(proj == 0).tolist()) == sorted(int(x) for x in D.lattice.elements[Z])


def test_nu_examples():
    G = build_group("C2^3")
    assert nu_invariant(G, 0, G.lattice.whole).value == 3
    K = build_group("C2^2")
    assert nu_invariant(K, K.lattice.whole, K.lattice.whole).value == 0
    D = build_group("D8")
    L = D.lattice
    c4 = next(s for s in range(len(L)) if L.orders[s] == 4 and is_cyclic(subgroup_as_group(D, s)[0]))
    for R in [s for s in range(len(L)) if L.orders[s] == 2 and not L.is_normal(s)]:
        nu = nu_invariant(D, R, c4)
        assert nu.value == float("inf") and not nu.full_set


@pytest.mark.parametrize("spec", ["C2^2", "C4", "D8", "C3^2"])
def test_nu_symmetric_on_normal_pairs(spec):
    G = build_group(spec)
    L = G.lattice
    normal = [s for s in range(len(L)) if L.is_normal(s)]
    for R in normal:
        for Q in normal:
            assert nu_invariant(G, R, Q).value == nu_invariant(G, Q, R).value
