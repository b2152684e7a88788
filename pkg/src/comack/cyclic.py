"""Cyclic p-groups: the modules E_d = k[X]/(X^d) (generator g acting as
1 + X), the maps e_d, alpha_d, beta_d between them, supersurjectivity, and the
explicit 2-periodic resolution of S_1.

All maps are matrices in the monomial bases 1, X, ..., X^{d-1}; a polynomial
map  Q -> X^a Q  from E_s to E_t has ones at (i + a, i).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fplinalg as fl
from .groups import build_group
from .mackey import (GModule, MackeyMorphism, ModuleMorphism, fixed_point_functor,
                     fixed_point_morphism, module_direct_sum, simple_functor)


class CyclicError(ValueError):
    pass


def cyclic_group(p, m):
    G = build_group(f"C{p ** m}")
    if len(G.generator_set) != 1:
        raise CyclicError("expected a single chosen generator")
    return G


def shift(s, t, a, p, coef=1):
    """Matrix of Q -> coef * X^a Q from E_s to E_t."""
    M = fl.zeros(t, s)
    for i in range(s):
        if i + a < t:
            M[i + a, i] = coef % p
    return M


def truncated_module(p, m, d, G=None):
    G = G or cyclic_group(p, m)
    if not 1 <= d <= p ** m:
        raise CyclicError(f"need 1 <= d <= {p ** m}")
    act = (fl.identity(d) + shift(d, d, 1, p)) % p
    return GModule(G, p, d, [act])


def is_power(d, p):
    while d % p == 0:
        d //= p
    return d == 1


def jordan_type(V):
    """Sizes of the Jordan blocks of X = g - 1 on V, decreasing."""
    p, n = V.p, V.dim
    X = (V.action[0].astype(np.int64) - np.eye(n, dtype=np.int64)) % p
    ranks = [n]
    Y = np.eye(n, dtype=np.int64)
    while ranks[-1]:
        Y = fl.matmul(Y.astype(np.uint8), X.astype(np.uint8), p).astype(np.int64)
        ranks.append(fl.rank(Y.astype(np.uint8), p) if n else 0)
    # number of blocks of size >= j is rank(X^{j-1}) - rank(X^j)
    ge = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    sizes = []
    for j in range(len(ge), 0, -1):
        cnt = ge[j - 1] - (ge[j] if j < len(ge) else 0)
        sizes += [j] * cnt
    return sizes


def _block(p, parts):
    """Assemble a map between direct sums of E's from a dict
    {(row part, col part): matrix}."""
    rows = [t for t in parts["targets"]]
    cols = [s for s in parts["sources"]]
    M = fl.zeros(sum(rows), sum(cols))
    ro = np.cumsum([0] + rows)
    co = np.cumsum([0] + cols)
    for (i, j), B in parts["blocks"].items():
        M[ro[i]:ro[i + 1], co[j]:co[j + 1]] = B % p
    return M


@dataclass
class PeriodicMaps:
    p: int
    m: int
    d: int
    h: int
    E: dict = field(default_factory=dict)      # size -> GModule
    pair: GModule = None                      # E_{p^h} + E_{p^{h+1}}
    e: ModuleMorphism = None
    alpha: ModuleMorphism = None
    beta: ModuleMorphism = None
    kernel_incl: ModuleMorphism = None        # E_{p^h+p^{h+1}-d} -> pair


def periodic_maps(p, m, d, G=None):
    if is_power(d, p):
        raise CyclicError(f"d={d} is a power of p: FP_E_d is already projective")
    G = G or cyclic_group(p, m)
    h = 0
    while not p ** h < d < p ** (h + 1):
        h += 1
    a, b = p ** h, p ** (h + 1)
    c = a + b - d
    E = {s: truncated_module(p, m, s, G) for s in {a, b, c, d}}
    pair = module_direct_sum(E[a], E[b])
    e = _block(p, {"targets": [d], "sources": [a, b],
                   "blocks": {(0, 0): shift(a, d, d - a, p), (0, 1): shift(b, d, 0, p)}})
    alpha = _block(p, {"targets": [a, b], "sources": [a, b],
                       "blocks": {(0, 0): shift(a, a, b - d, p, -1), (0, 1): shift(b, a, 0, p, -1),
                                  (1, 0): shift(a, b, b - a, p), (1, 1): shift(b, b, d - a, p)}})
    beta = _block(p, {"targets": [a, b], "sources": [a, b],
                      "blocks": {(0, 0): shift(a, a, d - a, p, -1), (0, 1): shift(b, a, 0, p, -1),
                                 (1, 0): shift(a, b, b - a, p), (1, 1): shift(b, b, b - d, p)}})
    # T -> (-T, X^{d-p^h} T)
    inc = _block(p, {"targets": [a, b], "sources": [c],
                     "blocks": {(0, 0): shift(c, a, 0, p, -1), (1, 0): shift(c, b, d - a, p)}})
    out = PeriodicMaps(p, m, d, h, E, pair,
                       ModuleMorphism(pair, E[d], e), ModuleMorphism(pair, pair, alpha),
                       ModuleMorphism(pair, pair, beta), ModuleMorphism(E[c], pair, inc))
    for f in (out.e, out.alpha, out.beta, out.kernel_incl):
        if not f.check():
            raise CyclicError("map is not G-equivariant")
    return out


@dataclass
class SurjectivityReport:
    per_subgroup: dict
    ok: bool

    def failures(self):
        return [h for h, v in self.per_subgroup.items() if not v]


def supersurjective_check(f):
    """Surjectivity of f on H-fixed points, for every subgroup H."""
    V, W = f.source, f.target
    if V.group is not W.group:
        raise CyclicError("source and target over different groups")
    res = {}
    for h in range(len(V.group.lattice)):
        BV, _ = V.fixed_points(h)
        BW, _ = W.fixed_points(h)
        img = fl.matmul(f.matrix, BV.T, V.p).T if len(BV) else fl.zeros(0, W.dim)
        res[h] = (fl.rank(img, V.p) if img.size else 0) == len(BW)
    return SurjectivityReport(res, all(res.values()))


def kernel_module(f):
    K = fl.nullspace(f.matrix, f.source.p)
    return f.source.submodule(K) if len(K) else None


def check_kernel(pm):
    """ker(e_d) is a single Jordan block of size p^h + p^{h+1} - d and the
    inclusion from E_{p^h+p^{h+1}-d} is injective with image the kernel."""
    p = pm.p
    c = p ** pm.h + p ** (pm.h + 1) - pm.d
    K = kernel_module(pm.e)
    if K is None or jordan_type(K) != [c]:
        return False
    inc = pm.kernel_incl.matrix
    if fl.rank(inc, p) != c or fl.matmul(pm.e.matrix, inc, p).any():
        return False
    return True


# ---- the explicit resolution of S_1 ------------------------------------------

@dataclass
class ExplicitResolution:
    """Chain  ... -> P_1 -> P_0 -> M -> 0  of FP functors of permutation
    modules, with the module pieces kept alongside."""
    group: object
    p: int
    modules: list            # V_n with P_n = FP_{V_n}
    summands: list           # per degree: list of E-sizes
    boundaries: list         # MackeyMorphism P_n -> P_{n-1}, n >= 1
    module_maps: list        # the underlying module maps
    augmentation: MackeyMorphism
    functors: list

    def multiplicities(self, n):
        """{subgroup id: multiplicity}; E_{p^j} is k(G/Q) with |Q| = p^{m-j}."""
        L = self.group.lattice
        order_to_id = {L.orders[s]: s for s in range(len(L))}
        out = {}
        for s in self.summands[n]:
            q = order_to_id[self.group.order // s]
            out[q] = out.get(q, 0) + 1
        return out

    def chain(self):
        """Maps in arrow order, ending with the augmentation."""
        return list(reversed(self.boundaries)) + [self.augmentation]

    def ext_dims(self):
        """dim Ext^n(S_1, S_1) from the Hom complex into S_1.

        A morphism FP_V -> S_1 is a G-invariant functional on V vanishing on
        the fixed points of the subgroup of order p."""
        p = self.p
        G = self.group
        L = G.lattice
        q1 = next(s for s in range(len(L)) if L.orders[s] == p)
        homs = []
        for V in self.modules:
            X = (V.action[0].astype(np.int64) - np.eye(V.dim, dtype=np.int64)) % p
            B, _ = V.fixed_points(q1)
            # functionals lam with lam X = 0 and lam(b) = 0 for b in V^{C_p}
            cons = np.vstack([X.T, B]).astype(np.uint8)
            homs.append(fl.nullspace(cons, p))
        dims = []
        for n, H in enumerate(homs):
            # coboundary Hom(P_{n-1}) -> Hom(P_n): lam -> lam . d_n
            into = 0
            if n >= 1 and len(homs[n - 1]):
                img = fl.matmul(homs[n - 1], self.module_maps[n - 1], p)
                into = fl.rank(img, p) if img.any() else 0
            out = 0
            if n + 1 < len(homs) and len(H):
                img = fl.matmul(H, self.module_maps[n], p)
                out = fl.rank(img, p) if img.any() else 0
            dims.append(len(H) - out - into)
        return dims[:-1]


def s1_periodic_resolution(p, m, n_max):
    """P_0 = FP_{kG}, P_n = FP_{E_{p^{m-1}} + E_{p^m}} for n >= 1, with
    boundaries FP_gamma, FP_alpha, FP_beta, FP_alpha, ..."""
    if p ** m < 3:
        raise CyclicError("needs |G| >= 3")
    G = cyclic_group(p, m)
    a, b = p ** (m - 1), p ** m
    pm = periodic_maps(p, m, b - 1, G)
    kG = pm.E[b]
    gamma = _block(p, {"targets": [b], "sources": [a, b],
                       "blocks": {(0, 0): shift(a, b, b - a, p), (0, 1): shift(b, b, 1, p)}})
    gamma = ModuleMorphism(pm.pair, kG, gamma)
    if not gamma.check():
        raise CyclicError("gamma is not G-equivariant")
    modules = [kG] + [pm.pair] * (n_max + 1)
    summands = [[b]] + [[a, b]] * (n_max + 1)
    FkG, Fpair = fixed_point_functor(kG), fixed_point_functor(pm.pair)
    functors = [FkG] + [Fpair] * (n_max + 1)
    maps = [gamma] + [pm.alpha if n % 2 else pm.beta for n in range(1, n_max + 1)]
    bounds = [fixed_point_morphism(maps[0], Fpair, FkG)]
    for f in maps[1:]:
        bounds.append(fixed_point_morphism(f, Fpair, Fpair))
    # augmentation: in the basis X^i of kG it reads off the coefficient of 1
    S1 = simple_functor(G, 0)
    comps = []
    for h in range(len(G.lattice)):
        if h == 0:
            B = FkG.fixed_bases[0][0]
            comps.append(B[:, :1].T.copy())
        else:
            comps.append(fl.zeros(S1.dims[h], FkG.dims[h]))
    eps = MackeyMorphism(FkG, S1, comps)
    return ExplicitResolution(G, p, modules, summands, bounds, [f.matrix for f in maps], eps, functors)
