"""Change-of-group functors between categories of cohomological Mackey
functors: restriction, induction, rho, iota, jota, inflation, transport."""
from __future__ import annotations

import numpy as np

from . import fplinalg as fl
from .groups import GroupError, mask_of, quotient_group, subgroup_as_group
from .mackey import dense, from_rule


def _scaled(m, s, p):
    return (dense(m).astype(np.int64) * (s % p)) % p


def sub_to_ambient(G, s):
    """For the subgroup s of G as a group: list mapping its lattice ids to G ids."""
    H, emb = subgroup_as_group(G, s)
    L = G.lattice
    return [L.index_of[mask_of(emb[el])] for el in H.lattice.elements]


def ambient_to_sub(G, s):
    """dict: G-subgroup id (contained in s) -> lattice id in the subgroup group."""
    return {g: i for i, g in enumerate(sub_to_ambient(G, s))}


def quotient_preimages(G, N):
    """For G/N: list mapping its lattice ids to the G ids of the preimages."""
    Q, proj = quotient_group(G, N)
    L = G.lattice
    out = []
    for el in Q.lattice.elements:
        out.append(L.index_of[mask_of(np.flatnonzero(np.isin(proj, el)))])
    return out


def quotient_images(G, N):
    """For every subgroup K of G: lattice id of KN/N in G/N."""
    Q, proj = quotient_group(G, N)
    QL = Q.lattice
    return [QL.index_of[mask_of(set(proj[el].tolist()))] for el in G.lattice.elements]


def _lift(proj, x):
    return int(np.flatnonzero(proj == x)[0])


def restrict(M, s):
    """Res^G_H M as a functor for the subgroup s viewed as a group."""
    G = M.group
    H, emb = subgroup_as_group(G, s)
    ids = sub_to_ambient(G, s)
    HL = H.lattice
    dims = [M.dims[ids[h]] for h in range(len(HL))]
    return from_rule(H, M.p, dims,
                     lambda h, k: dense(M.t(ids[h], ids[k])),
                     lambda h, k: dense(M.r(ids[h], ids[k])),
                     lambda i, h: dense(M.c(int(emb[H.generator_set[i]]), ids[h])))


class _HSets:
    """Left cosets G/K viewed as H-sets, one per subgroup K of G."""

    def __init__(self, G, s):
        self.G, self.s = G, s
        L = G.lattice
        self.he = L.elements[s]
        H, emb = subgroup_as_group(G, s)
        self.pos = {int(e): i for i, e in enumerate(emb)}
        self.a2s = ambient_to_sub(G, s)
        self.data = {}
        for K in range(len(L)):
            cosets, coset_of = L.left_cosets(K)
            orbit_of = np.full(len(cosets), -1)
            h_of = np.zeros(len(cosets), dtype=np.int64)
            orbits = []
            for c in range(len(cosets)):
                if orbit_of[c] >= 0:
                    continue
                a = cosets[c][0]
                for h in self.he:
                    c2 = coset_of[G.mult[h, a]]
                    if orbit_of[c2] < 0:
                        orbit_of[c2] = len(orbits)
                        h_of[c2] = h
                stab = L.meet(s, L.conj(a, K))
                orbits.append((c, a, stab))
            self.data[K] = (cosets, coset_of, orbits, orbit_of, h_of)


def induce(M, G, s):
    """Ind_H^G M for M a functor over the subgroup s of G (as a group).

    Value at K: sum over H-orbits on G/K of M(stabilizer); structure maps
    come from pushing and pulling along the G-maps G/K -> G/L.
    """
    H, emb = subgroup_as_group(G, s)
    if M.group is not H:
        raise GroupError("functor is not over the given subgroup")
    L, p = G.lattice, M.p
    X = _HSets(G, s)
    a2s = X.a2s
    dims = []
    offs = {}
    for K in range(len(L)):
        orbits = X.data[K][2]
        o = [0]
        for (_, _, stab) in orbits:
            o.append(o[-1] + M.dims[a2s[stab]])
        offs[K] = o
        dims.append(o[-1])

    def blocks(K, Lk, fmap, push):
        _, _, orbitsK, _, _ = X.data[K]
        _, _, orbitsL, orbit_ofL, h_ofL = X.data[Lk]
        out = np.zeros((dims[Lk], dims[K]) if push else (dims[K], dims[Lk]), dtype=np.int64)
        for j, (c, a, stab) in enumerate(orbitsK):
            y = fmap(a)
            jj = orbit_ofL[y]
            h = int(h_ofL[y])
            sy = L.conj(h, orbitsL[jj][2])  # stabilizer of y, = h (stab of rep) h^-1
            hx = X.pos[h]
            if push:
                m = fl.matmul(dense(M.c(int(H.inv[hx]), a2s[sy])), dense(M.t(a2s[stab], a2s[sy])), p)
                out[offs[Lk][jj]:offs[Lk][jj + 1], offs[K][j]:offs[K][j + 1]] += m
            else:
                m = fl.matmul(dense(M.r(a2s[stab], a2s[sy])), dense(M.c(hx, a2s[orbitsL[jj][2]])), p)
                out[offs[K][j]:offs[K][j + 1], offs[Lk][jj]:offs[Lk][jj + 1]] += m
        return out % p

    def coset_map(Lk):
        coset_of = X.data[Lk][1]
        return lambda a: coset_of[a]

    def conj(i, K):
        g = G.generator_set[i]
        gK = L.conj(g, K)
        coset_of = X.data[gK][1]
        gi = int(G.inv[g])
        return blocks(K, gK, lambda a: coset_of[G.mult[a, gi]], True)

    return from_rule(G, p, dims,
                     lambda h, k: blocks(h, k, coset_map(k), True),
                     lambda h, k: blocks(h, k, coset_map(k), False),
                     conj)


def rho(M, N):
    """rho_{G/N}: (rho M)(K/N) = M(K), maps obtained by removing the bars."""
    G = M.group
    Q, proj = quotient_group(G, N)
    pre = quotient_preimages(G, N)
    dims = [M.dims[pre[h]] for h in range(len(Q.lattice))]
    return from_rule(Q, M.p, dims,
                     lambda h, k: dense(M.t(pre[h], pre[k])),
                     lambda h, k: dense(M.r(pre[h], pre[k])),
                     lambda i, h: dense(M.c(_lift(proj, Q.generator_set[i]), pre[h])))


def _iota_like(M, G, N, scale_t):
    Q, proj = quotient_group(G, N)
    if M.group is not Q:
        raise GroupError("functor is not over G/N")
    L, p = G.lattice, M.p
    img = quotient_images(G, N)
    dims = [M.dims[img[h]] for h in range(len(L))]

    def scale(h, k):
        return L.orders[L.meet(k, N)] // L.orders[L.meet(h, N)]

    def t(h, k):
        m = dense(M.t(img[h], img[k]))
        return _scaled(m, scale(h, k), p) if scale_t else m

    def r(h, k):
        m = dense(M.r(img[h], img[k]))
        return m if scale_t else _scaled(m, scale(h, k), p)

    return from_rule(G, p, dims, t, r,
                     lambda i, h: dense(M.c(int(proj[G.generator_set[i]]), img[h])))


def iota(M, G, N):
    """iota_{G/N}: value M(KN/N), transfers scaled by |L cap N : K cap N|."""
    return _iota_like(M, G, N, True)


def jota(M, G, N):
    """jota_{G/N}: value M(KN/N), restrictions scaled by |L cap N : K cap N|."""
    return _iota_like(M, G, N, False)


def inflate(M, G, N):
    """Inf_{G/N}^G: M(H/N) when H contains N, zero otherwise."""
    Q, proj = quotient_group(G, N)
    if M.group is not Q:
        raise GroupError("functor is not over G/N")
    L, p = G.lattice, M.p
    img = quotient_images(G, N)
    above = [L.inclusion[N, h] for h in range(len(L))]
    dims = [M.dims[img[h]] if above[h] else 0 for h in range(len(L))]
    return from_rule(G, p, dims,
                     lambda h, k: dense(M.t(img[h], img[k])) if above[h] else None,
                     lambda h, k: dense(M.r(img[h], img[k])) if above[h] else None,
                     lambda i, h: dense(M.c(int(proj[G.generator_set[i]]), img[h])) if above[h] else None)


def transport(M, f, H):
    """Iso(f): transport of M along a group isomorphism f: G -> H (array)."""
    G = M.group
    f = np.asarray(f)
    if sorted(f.tolist()) != list(range(H.order)) or G.order != H.order:
        raise GroupError("f is not a bijection")
    if not np.array_equal(f[G.mult], H.mult[f[:, None], f[None, :]]):
        raise GroupError("f is not a homomorphism")
    finv = np.argsort(f)
    L, HL = G.lattice, H.lattice
    pre = [L.index_of[mask_of(finv[el])] for el in HL.elements]
    dims = [M.dims[pre[h]] for h in range(len(HL))]
    return from_rule(H, M.p, dims,
                     lambda h, k: dense(M.t(pre[h], pre[k])),
                     lambda h, k: dense(M.r(pre[h], pre[k])),
                     lambda i, h: dense(M.c(int(finv[H.generator_set[i]]), pre[h])))


def change_of_group(M, kind, data):
    """Dispatch: res (data=subgroup id), ind (data=(G, subgroup id)),
    rho (data=N), iota/jota/inflate (data=(G, N)), iso (data=(f, H))."""
    if kind == "res":
        return restrict(M, data)
    if kind == "ind":
        return induce(M, *data)
    if kind == "rho":
        return rho(M, data)
    if kind == "iota":
        return iota(M, *data)
    if kind == "jota":
        return jota(M, *data)
    if kind == "inflate":
        return inflate(M, *data)
    if kind == "iso":
        return transport(M, *data)
    raise ValueError(f"unknown change of group {kind!r}")
