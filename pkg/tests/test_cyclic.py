import numpy as np
import pytest

from comack import fplinalg as fl
from comack.cyclic import (CyclicError, check_kernel, cyclic_group, is_power, jordan_type,
                           kernel_module, periodic_maps, s1_periodic_resolution,
                           supersurjective_check, truncated_module)
from comack.homological import simple_resolution, verify_exact
from comack.mackey import (ModuleMorphism, fixed_point_functor, fixed_point_morphism,
                           module_direct_sum, perm_module, trivial_module, verify_axioms)


def subgroup_of_order(G, n):
    L = G.lattice
    return next(s for s in range(len(L)) if L.orders[s] == n)


def test_truncated_examples():
    G = cyclic_group(3, 2)
    E9 = truncated_module(3, 2, 9, G)
    assert jordan_type(E9) == jordan_type(perm_module(G, 0)) == [9]
    assert truncated_module(3, 2, 1, G).action[0].tolist() == [[1]]
    B, _ = truncated_module(3, 2, 5, G).fixed_points(subgroup_of_order(G, 3))
    assert len(B) == 3
    with pytest.raises(CyclicError):
        truncated_module(3, 2, 10)
    with pytest.raises(CyclicError):
        truncated_module(3, 2, 0)


@pytest.mark.parametrize("p, m", [(2, 3), (3, 2), (5, 1)])
def test_fixed_point_dims(p, m):
    # the subgroup of order p^j is generated by g^{p^{m-j}}, acting as 1 + X^{p^{m-j}}
    G = cyclic_group(p, m)
    for d in range(1, p ** m + 1):
        E = truncated_module(p, m, d, G)
        E.validate()
        for j in range(m + 1):
            B, _ = E.fixed_points(subgroup_of_order(G, p ** j))
            assert len(B) == min(d, p ** (m - j))


def test_jordan_type_of_sums():
    G = cyclic_group(2, 3)
    V = module_direct_sum(truncated_module(2, 3, 2, G), truncated_module(2, 3, 5, G))
    assert jordan_type(V) == [5, 2]
    assert jordan_type(trivial_module(G)) == [1]


def test_is_power():
    assert [d for d in range(1, 30) if is_power(d, 3)] == [1, 3, 9, 27]
    with pytest.raises(CyclicError):
        periodic_maps(3, 2, 3)


def test_periodic_examples():
    pm = periodic_maps(3, 2, 5)
    assert pm.h == 1
    assert kernel_module(pm.e).dim == 7
    pm = periodic_maps(2, 2, 3)
    assert pm.h == 1 and kernel_module(pm.e).dim == 3


@pytest.mark.parametrize("p, m", [(2, 3), (3, 2), (3, 3)])
def test_kernels_and_supersurjectivity(p, m):
    G = cyclic_group(p, m)
    for d in range(2, p ** m):
        if is_power(d, p):
            continue
        pm = periodic_maps(p, m, d, G)
        assert supersurjective_check(pm.e).ok
        assert check_kernel(pm)


@pytest.mark.parametrize("p, m", [(2, 3), (3, 2)])
def test_fp_surjective_iff_supersurjective(p, m):
    G = cyclic_group(p, m)
    for d in range(2, p ** m):
        if is_power(d, p):
            continue
        pm = periodic_maps(p, m, d, G)
        F = fixed_point_morphism(pm.e)
        assert verify_exact([F], injective_start=False).ok == supersurjective_check(pm.e).ok
        # alpha and beta compose to zero in both orders
        assert not fl.matmul(pm.alpha.matrix, pm.beta.matrix, p).any()
        assert not fl.matmul(pm.beta.matrix, pm.alpha.matrix, p).any()


def test_supersurjective_examples():
    G = cyclic_group(2, 1)
    aug = ModuleMorphism(perm_module(G, 0), trivial_module(G), np.ones((1, 2), dtype=np.uint8))
    assert aug.check()
    rep = supersurjective_check(aug)
    assert not rep.ok and rep.failures() == [G.lattice.whole]
    assert not verify_exact([fixed_point_morphism(aug)], injective_start=False).ok
    E = truncated_module(3, 2, 4)
    assert supersurjective_check(ModuleMorphism(E, E, fl.identity(4))).ok


@pytest.mark.parametrize("p, m", [(3, 1), (2, 2), (3, 2), (2, 3)])
def test_s1_resolution(p, m):
    n = 10
    R = s1_periodic_resolution(p, m, n)
    assert R.ext_dims() == [1] * (n + 1)
    assert verify_exact(R.chain(), injective_start=False).ok
    mr = simple_resolution(R.group, 0, n)
    assert [R.multiplicities(k) for k in range(n + 1)] == mr.terms()[:n + 1]
    for F in R.functors[:2]:
        assert verify_axioms(F)


def test_s1_resolution_needs_order_three():
    with pytest.raises(CyclicError):
        s1_periodic_resolution(2, 1, 4)
