"""Projective cohomological Mackey functors  P = sum_i FP_{k(G/Q_i)}  and
morphisms out of them.

FP_{k(G/Q)}(H) has as basis the H-orbit sums on G/Q, so all structure maps
are sparse: restriction sends an orbit sum to the sum of the smaller orbits
inside it, transfer multiplies by |Stab_K : Stab_H|, conjugation permutes
orbits.  A morphism out of P is determined by the images of its generators
(the element 1.Q of each summand), and its component at H is

    (H g Q-orbit)  ->  t^H_{H cap gQ} r^{gQ}_{H cap gQ} c_{g,Q}(m).
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from . import fplinalg as fl
from .mackey import apply_rows


class OrbitData:
    """H-orbits on G/Q for all pairs, with the sparse structure maps of
    FP_{k(G/Q)}.  One instance per group (see orbit_data)."""

    def __init__(self, G):
        self.G = G
        self.L = G.lattice
        self._perm = {}
        self._orb = {}
        self._maps = {}

    def perm(self, Q):
        """perm[x, c]: coset index of x.(coset c) on G/Q."""
        if Q not in self._perm:
            cosets, coset_of = self.L.left_cosets(Q)
            reps = np.array([c[0] for c in cosets])
            self._perm[Q] = (coset_of[self.G.mult[:, reps]], reps)
        return self._perm[Q]

    def orbits(self, Q, H):
        """(rep_elements, rep_cosets, orbit_of_coset, stab_orders)."""
        key = (Q, H)
        if key not in self._orb:
            perm, reps = self.perm(Q)
            he = self.L.elements[H]
            n = perm.shape[1]
            orbit_of = np.full(n, -1, dtype=np.int64)
            rep_el, rep_c, sizes = [], [], []
            for c in range(n):
                if orbit_of[c] < 0:
                    members = np.unique(perm[he, c])
                    orbit_of[members] = len(rep_el)
                    rep_el.append(int(reps[members].min()))
                    rep_c.append(c)
                    sizes.append(len(members))
            stab = [len(he) // s for s in sizes]
            self._orb[key] = (rep_el, rep_c, orbit_of, stab)
        return self._orb[key]

    def n(self, Q, H):
        return len(self.orbits(Q, H)[0])

    def restriction(self, Q, h, k):
        key = ("r", Q, h, k)
        if key not in self._maps:
            _, rc, _, _ = self.orbits(Q, h)
            _, _, ofk, _ = self.orbits(Q, k)
            rows = np.arange(len(rc))
            cols = ofk[rc]
            self._maps[key] = sp.csr_matrix((np.ones(len(rc), dtype=np.int64), (rows, cols)),
                                            shape=(len(rc), self.n(Q, k)))
        return self._maps[key]

    def transfer(self, Q, h, k):
        key = ("t", Q, h, k)
        if key not in self._maps:
            p = self.G.p
            _, rc, _, sh = self.orbits(Q, h)
            _, _, ofk, sk = self.orbits(Q, k)
            par = ofk[rc]
            coef = np.array([(sk[par[j]] // sh[j]) % p for j in range(len(rc))], dtype=np.int64)
            keep = coef != 0
            self._maps[key] = sp.csr_matrix((coef[keep], (par[keep], np.arange(len(rc))[keep])),
                                            shape=(self.n(Q, k), len(rc)))
        return self._maps[key]

    def conj(self, Q, g, h):
        key = ("c", Q, g, h)
        if key not in self._maps:
            perm, _ = self.perm(Q)
            gh = self.L.conj(g, h)
            _, rc, _, _ = self.orbits(Q, h)
            _, _, ofg, _ = self.orbits(Q, gh)
            rows = ofg[perm[g, rc]]
            self._maps[key] = sp.csr_matrix((np.ones(len(rc), dtype=np.int64), (rows, np.arange(len(rc)))),
                                            shape=(self.n(Q, gh), len(rc)))
        return self._maps[key]


def orbit_data(G):
    if "orbits" not in G._derived:
        G._derived["orbits"] = OrbitData(G)
    return G._derived["orbits"]


class ProjectiveFunctor:
    """sum over generators i of FP_{k(G/Q_i)}; gens is a list of subgroup ids
    (class representatives), kept sorted so equal summands are adjacent."""

    def __init__(self, G, p, gens):
        self.lattice = G.lattice
        self.p = p
        self.gens = sorted(int(q) for q in gens)
        self.od = orbit_data(G)
        self.blocks = []  # (Q, multiplicity)
        for q in self.gens:
            if self.blocks and self.blocks[-1][0] == q:
                self.blocks[-1] = (q, self.blocks[-1][1] + 1)
            else:
                self.blocks.append((q, 1))
        S = len(self.lattice)
        self.dims = [sum(m * self.od.n(q, h) for q, m in self.blocks) for h in range(S)]
        self._cache = {}

    @property
    def group(self):
        return self.lattice.group

    @property
    def total_dim(self):
        return int(sum(self.dims))

    def multiplicities(self):
        return dict(self.blocks)

    def __repr__(self):
        return f"ProjectiveFunctor({self.group.spec_string}, gens={self.multiplicities()})"

    def offsets(self, h):
        """Column offset of each generator's block in P(h), generator order."""
        key = ("off", h)
        if key not in self._cache:
            o, out = 0, []
            for q, m in self.blocks:
                n = self.od.n(q, h)
                for _ in range(m):
                    out.append(o)
                    o += n
            self._cache[key] = out
        return self._cache[key]

    def _diag(self, key, per_q):
        """Block diagonal over summands of a per-Q sparse map, assembled
        directly in COO form."""
        if key not in self._cache:
            rows, cols, vals = [], [], []
            r0 = c0 = 0
            for q, m in self.blocks:
                base = per_q(q).tocoo()
                nr, nc = base.shape
                ro = r0 + nr * np.arange(m)
                co = c0 + nc * np.arange(m)
                rows.append((base.row[None, :] + ro[:, None]).ravel())
                cols.append((base.col[None, :] + co[:, None]).ravel())
                vals.append(np.tile(base.data, m))
                r0 += nr * m
                c0 += nc * m
            if rows:
                self._cache[key] = sp.csr_matrix(
                    (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(r0, c0))
            else:
                self._cache[key] = sp.csr_matrix((0, 0), dtype=np.int64)
        return self._cache[key]

    def t(self, h, k):
        if h == k:
            return sp.identity(self.dims[h], dtype=np.int64, format="csr")
        return self._diag(("t", h, k), lambda q: self.od.transfer(q, h, k))

    def r(self, h, k):
        if h == k:
            return sp.identity(self.dims[h], dtype=np.int64, format="csr")
        return self._diag(("r", h, k), lambda q: self.od.restriction(q, h, k))

    def c(self, g, h):
        return self._diag(("c", g, h), lambda q: self.od.conj(q, g, h))

    def generator_vector(self, i):
        """The generator of summand i as a vector of P(Q_i) (orbit of 1.Q)."""
        q = self.gens[i]
        v = fl.zeros(1, self.dims[q])
        # the coset Q itself is coset 0 and is fixed by Q, so its Q-orbit is orbit 0
        v[0, self.offsets(q)[i]] = 1
        return v[0]


class ProjectiveMorphism:
    """A morphism P -> T out of a ProjectiveFunctor, given by the images of
    the generators: images[i] is a vector of T(Q_i)."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.p = source.p
        self.images = [fl.fp(np.asarray(v).reshape(-1), self.p) for v in images]
        for i, v in enumerate(self.images):
            if v.shape[0] != target.dims[source.gens[i]]:
                raise ValueError("generator image has wrong dimension")
        self._comp = {}

    def component(self, h):
        """Matrix of the component P(h) -> T(h)."""
        if h not in self._comp:
            P, T, p = self.source, self.target, self.p
            L = P.lattice
            out = fl.zeros(T.dims[h], P.dims[h])
            offs = P.offsets(h)
            i0 = 0
            for q, m in P.blocks:
                B = np.vstack(self.images[i0:i0 + m]) if T.dims[q] else fl.zeros(m, 0)
                rep_el = P.od.orbits(q, h)[0]
                for j, g in enumerate(rep_el):
                    gq = L.conj(g, q)
                    I = L.meet(h, gq)
                    V = apply_rows(T.c(g, q), B, p)
                    V = apply_rows(T.r(I, gq), V, p)
                    V = apply_rows(T.t(I, h), V, p)
                    for a in range(m):
                        out[:, offs[i0 + a] + j] = V[a]
                i0 += m
            self._comp[h] = out
        return self._comp[h]

    def apply(self, h, rows):
        """Images of row vectors of P(h)."""
        return apply_rows(self.component(h), rows, self.p)

    def then(self, f):
        """f o self, for f with component(h)."""
        P = self.source
        return ProjectiveMorphism(P, f.target,
                                  [apply_rows(f.component(P.gens[i]), v[None, :], self.p)[0]
                                   for i, v in enumerate(self.images)])

    def to_morphism(self):
        from .mackey import MackeyMorphism, materialize
        S = len(self.source.lattice)
        src = materialize(self.source)
        tgt = self.target if hasattr(self.target, "transfers") else materialize(self.target)
        return MackeyMorphism(src, tgt, [self.component(h) for h in range(S)])
