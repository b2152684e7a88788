"""Cohomological Mackey functors over F_p as explicit linear-algebra data.

Conventions: a map M(H) -> M(K) is a (dim M(K)) x (dim M(H)) matrix acting on
column vectors.  Subgroups are lattice ids.  Every functor-like object exposes

    lattice, group, p, dims,
    t(h, k)  transfer M(h) -> M(k) for h <= k,
    r(h, k)  restriction M(k) -> M(h) for h <= k,
    c(g, h)  conjugation M(h) -> M(g h g^-1) for a group element g,

and MackeyFunctor stores only covering-pair maps and generator conjugations,
deriving the rest along the smallest maximal chain / a word in the generators.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import fplinalg as fl
from .groups import GroupError


def apply_rows(mat, rows, p):
    """Image of row vectors under a map given as a matrix (dense or sparse)."""
    if rows.shape[0] == 0 or mat.shape[0] == 0:
        return fl.zeros(rows.shape[0], mat.shape[0])
    return fl.matmul(mat, np.asarray(rows).T, p).T.copy()


def dense(mat):
    return mat.toarray().astype(np.uint8) if sp.issparse(mat) else np.asarray(mat, dtype=np.uint8)


# ---- modules --------------------------------------------------------------

class GModule:
    """A kG-module given by one matrix per group generator (column action)."""

    def __init__(self, group, p, dim, action, check=True):
        self.group = group
        self.p = p
        self.dim = dim
        self.action = [fl.fp(np.asarray(a).reshape(dim, dim), p) for a in action]
        if len(self.action) != len(group.generator_set):
            raise ValueError("need one matrix per group generator")
        self._elt = None
        if check:
            self.validate()

    def element_matrices(self):
        """rho(g) for every element g, composed along generator words."""
        if self._elt is None:
            G = self.group
            words = G.words()
            mats = [None] * G.order
            for g in sorted(range(G.order), key=lambda g: len(words[g])):
                w = words[g]
                if not w:
                    mats[g] = fl.identity(self.dim)
                else:
                    prev = G.mult[g, G.inv[G.generator_set[w[-1]]]]
                    mats[g] = fl.matmul(mats[prev], self.action[w[-1]], self.p)
            self._elt = mats
        return self._elt

    def rho(self, g):
        return self.element_matrices()[g]

    def validate(self):
        G = self.group
        mats = self.element_matrices()
        for a in self.action:
            if not fl.is_invertible(a, self.p) and self.dim:
                raise ValueError("action matrix is not invertible")
        for g in range(G.order):
            for i, x in enumerate(G.generator_set):
                if not np.array_equal(fl.matmul(mats[g], self.action[i], self.p), mats[G.mult[g, x]]):
                    raise ValueError("action does not respect the multiplication table")

    def fixed_points(self, H):
        """RREF row basis of V^H and its pivots."""
        L = self.group.lattice
        gens = L.generators(H)
        if not gens or self.dim == 0:
            B = fl.identity(self.dim)
            return B, list(range(self.dim))
        stack = np.vstack([(self.rho(g).astype(np.int64) - np.eye(self.dim, dtype=np.int64)) % self.p
                           for g in gens])
        B = fl.nullspace(stack, self.p)
        piv = [int(np.flatnonzero(r)[0]) for r in B]
        return B, piv

    def submodule(self, basis):
        """The submodule spanned by the rows of basis (must be G-stable)."""
        R, piv = fl.rref(basis, self.p)
        act = []
        for a in self.action:
            img = apply_rows(a, R, self.p)
            if not fl.in_span(R, piv, img, self.p) and len(img):
                raise ValueError("basis does not span a submodule")
            act.append(fl.coords(R, piv, img).T)
        return GModule(self.group, self.p, len(piv), act)


def module_direct_sum(*mods):
    G, p = mods[0].group, mods[0].p
    dim = sum(m.dim for m in mods)
    act = []
    for i in range(len(G.generator_set)):
        a = fl.zeros(dim, dim)
        o = 0
        for m in mods:
            a[o:o + m.dim, o:o + m.dim] = m.action[i]
            o += m.dim
        act.append(a)
    return GModule(G, p, dim, act)


def perm_module(G, Q):
    """k(G/Q): basis the left cosets gQ, ordered by smallest element."""
    L = G.lattice
    cosets, coset_of = L.left_cosets(Q)
    n = len(cosets)
    act = []
    for x in G.generator_set:
        a = fl.zeros(n, n)
        for j, c in enumerate(cosets):
            a[coset_of[G.mult[x, c[0]]], j] = 1
        act.append(a)
    return GModule(G, G.p, n, act)


def trivial_module(G):
    return perm_module(G, G.lattice.whole)


def augmentation_kernel(G):
    """Omega_G: kernel of the augmentation kG -> k, spanned by g - 1."""
    V = perm_module(G, 0)
    rows = fl.zeros(G.order - 1, G.order)
    for g in range(1, G.order):
        rows[g - 1, 0] = G.p - 1
        rows[g - 1, g] = 1
    return V.submodule(rows)


@dataclass
class ModuleMorphism:
    source: GModule
    target: GModule
    matrix: np.ndarray

    def check(self):
        p = self.source.p
        for a, b in zip(self.source.action, self.target.action):
            if not np.array_equal(fl.matmul(self.matrix, a, p), fl.matmul(b, self.matrix, p)):
                return False
        return True


# ---- functors -------------------------------------------------------------

class FunctorMaps:
    """Shared derived-map logic for functors storing cover maps and
    generator conjugations."""

    def _chain(self, h, k):
        L = self.lattice
        chain = [h]
        cur = h
        while cur != k:
            cur = min(c for c in L.covers_above[cur] if L.inclusion[c, k])
            chain.append(cur)
        return chain

    def t(self, h, k):
        key = ("t", h, k)
        if key not in self._cache:
            if h == k:
                m = fl.identity(self.dims[h])
            else:
                ch = self._chain(h, k)
                m = fl.identity(self.dims[h])
                for a, b in zip(ch, ch[1:]):
                    m = fl.matmul(self.cover_t(a, b), m, self.p)
            self._cache[key] = m
        return self._cache[key]

    def r(self, h, k):
        key = ("r", h, k)
        if key not in self._cache:
            if h == k:
                m = fl.identity(self.dims[h])
            else:
                ch = self._chain(h, k)
                m = fl.identity(self.dims[k])
                for a, b in reversed(list(zip(ch, ch[1:]))):
                    m = fl.matmul(self.cover_r(a, b), m, self.p)
            self._cache[key] = m
        return self._cache[key]

    def c(self, g, h):
        key = ("c", g, h)
        if key not in self._cache:
            G, L = self.group, self.lattice
            m = fl.identity(self.dims[h])
            cur = h
            for i in reversed(G.words()[g]):
                m = fl.matmul(self.gen_c(i, cur), m, self.p)
                cur = L.conj(G.generator_set[i], cur)
            self._cache[key] = m
        return self._cache[key]

    @property
    def total_dim(self):
        return int(sum(self.dims))

    @property
    def group(self):
        return self.lattice.group


class MackeyFunctor(FunctorMaps):
    def __init__(self, group, p, dims, transfers, restrictions, conjugations):
        self.lattice = group.lattice
        self.p = p
        self.dims = [int(d) for d in dims]
        L = self.lattice
        if len(self.dims) != len(L):
            raise ValueError("need one dimension per subgroup")
        self.transfers = {}
        self.restrictions = {}
        for (h, k) in L.covers:
            self.transfers[(h, k)] = fl.fp(np.asarray(transfers[(h, k)]).reshape(self.dims[k], self.dims[h]), p)
            self.restrictions[(h, k)] = fl.fp(np.asarray(restrictions[(h, k)]).reshape(self.dims[h], self.dims[k]), p)
        self.conjugations = {}
        for i, x in enumerate(group.generator_set):
            for h in range(len(L)):
                xh = L.conj(x, h)
                self.conjugations[(i, h)] = fl.fp(np.asarray(conjugations[(i, h)]).reshape(self.dims[xh], self.dims[h]), p)
        self._cache = {}

    def cover_t(self, h, k):
        return self.transfers[(h, k)]

    def cover_r(self, h, k):
        return self.restrictions[(h, k)]

    def gen_c(self, i, h):
        return self.conjugations[(i, h)]

    def __repr__(self):
        return f"MackeyFunctor({self.group.spec_string}, dims={self.dims})"

    def to_dict(self):
        return {
            "group": self.group.spec_string,
            "p": self.p,
            "dims": self.dims,
            "transfers": {f"{h},{k}": m.tolist() for (h, k), m in self.transfers.items()},
            "restrictions": {f"{h},{k}": m.tolist() for (h, k), m in self.restrictions.items()},
            "conjugations": {f"{i},{h}": m.tolist() for (i, h), m in self.conjugations.items()},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d, group):
        if d["group"] != group.spec_string:
            raise ValueError("group mismatch")
        key = lambda s: tuple(int(x) for x in s.split(","))
        dims = d["dims"]
        L = group.lattice

        def mat(v, r, c):
            return np.array(v, dtype=np.int64).reshape(r, c)
        t = {key(s): mat(v, dims[key(s)[1]], dims[key(s)[0]]) for s, v in d["transfers"].items()}
        r = {key(s): mat(v, dims[key(s)[0]], dims[key(s)[1]]) for s, v in d["restrictions"].items()}
        c = {}
        for s, v in d["conjugations"].items():
            i, h = key(s)
            c[(i, h)] = mat(v, dims[L.conj(group.generator_set[i], h)], dims[h])
        return cls(group, d["p"], dims, t, r, c)

    @classmethod
    def from_json(cls, text, group):
        return cls.from_dict(json.loads(text), group)


def materialize(F):
    """A MackeyFunctor with the same data as any functor-like object."""
    G, L = F.group, F.lattice
    t = {(h, k): dense(F.t(h, k)) for h, k in L.covers}
    r = {(h, k): dense(F.r(h, k)) for h, k in L.covers}
    c = {(i, h): dense(F.c(x, h)) for i, x in enumerate(G.generator_set) for h in range(len(L))}
    return MackeyFunctor(G, F.p, F.dims, t, r, c)


def zero_functor(G, p=None):
    return from_rule(G, p or G.p, [0] * len(G.lattice), lambda *a: None, lambda *a: None, lambda *a: None)


def from_rule(G, p, dims, t_rule, r_rule, c_rule):
    """Build a functor from callables giving cover and generator maps;
    a rule returning None means the zero map."""
    L = G.lattice
    t, r, c = {}, {}, {}
    for h, k in L.covers:
        m = t_rule(h, k)
        t[(h, k)] = fl.zeros(dims[k], dims[h]) if m is None else m
        m = r_rule(h, k)
        r[(h, k)] = fl.zeros(dims[h], dims[k]) if m is None else m
    for i, x in enumerate(G.generator_set):
        for h in range(len(L)):
            m = c_rule(i, h)
            c[(i, h)] = fl.zeros(dims[L.conj(x, h)], dims[h]) if m is None else m
    return MackeyFunctor(G, p, dims, t, r, c)


def direct_sum(*functors):
    G, p = functors[0].group, functors[0].p
    L = G.lattice
    dims = [sum(F.dims[h] for F in functors) for h in range(len(L))]

    def block(mats, rdim, cdim):
        out = fl.zeros(rdim, cdim)
        ro = co = 0
        for m in mats:
            m = dense(m)
            out[ro:ro + m.shape[0], co:co + m.shape[1]] = m
            ro += m.shape[0]
            co += m.shape[1]
        return out
    return from_rule(
        G, p, dims,
        lambda h, k: block([F.t(h, k) for F in functors], dims[k], dims[h]),
        lambda h, k: block([F.r(h, k) for F in functors], dims[h], dims[k]),
        lambda i, h: block([F.c(G.generator_set[i], h) for F in functors],
                           dims[L.conj(G.generator_set[i], h)], dims[h]))


# ---- constructions --------------------------------------------------------

def fixed_point_functor(V):
    """FP_V: H -> V^H, transfer = relative trace, restriction = inclusion,
    conjugation = action."""
    G, p = V.group, V.p
    L = G.lattice
    bases = [V.fixed_points(h) for h in range(len(L))]
    dims = [b[0].shape[0] for b in bases]

    def trace(h, k):
        cos, _ = L.left_cosets(h)
        reps = [c[0] for c in cos if L.member[k, c[0]]]
        tot = sum(V.rho(x).astype(np.int64) for x in reps) % p
        Bh = bases[h][0]
        img = apply_rows(tot, Bh, p)
        return fl.coords(*bases[k], img).T

    def incl(h, k):
        Bk = bases[k][0]
        return fl.coords(bases[h][0], bases[h][1], Bk).T

    def conj(i, h):
        x = G.generator_set[i]
        img = apply_rows(V.action[i], bases[h][0], p)
        b = bases[L.conj(x, h)]
        return fl.coords(b[0], b[1], img).T

    F = from_rule(G, p, dims, trace, incl, conj)
    F.fixed_bases = bases
    return F


def fixed_point_morphism(f, FV=None, FW=None):
    """FP_f : FP_V -> FP_W for a module map f : V -> W (restriction of f to
    fixed points)."""
    FV = FV or fixed_point_functor(f.source)
    FW = FW or fixed_point_functor(f.target)
    p = f.source.p
    comps = []
    for h in range(len(FV.dims)):
        img = apply_rows(f.matrix, FV.fixed_bases[h][0], p)
        comps.append(fl.coords(*FW.fixed_bases[h], img).T.reshape(FW.dims[h], FV.dims[h]))
    return MackeyMorphism(FV, FW, comps)


def simple_functor(G, Q):
    """S_Q: k at the conjugates of Q, all maps between distinct subgroups zero."""
    L = G.lattice
    cls = set(L.classes[L.class_of[Q]])
    dims = [1 if h in cls else 0 for h in range(len(L))]
    one = np.ones((1, 1), dtype=np.uint8)
    return from_rule(G, G.p, dims, lambda h, k: None, lambda h, k: None,
                     lambda i, h: one if dims[h] else None)


def check_convex(L, members):
    """members: bool per subgroup.  Raise unless G-stable and convex."""
    m = np.asarray(members, dtype=bool)
    for cl in L.classes:
        if len(set(m[cl].tolist())) > 1:
            raise ValueError("set is not G-stable")
    below = (L.inclusion & m[:, None]).any(axis=0)
    above = (L.inclusion & m[None, :]).any(axis=1)
    if np.any(below & above & ~m):
        raise ValueError("set is not convex")


def convex_functor(G, classes):
    """k_S for a convex G-stable set S of subgroup classes: restriction 1
    between members, transfer |K:H| mod p, conjugations identity."""
    L = G.lattice
    classes = set(classes)
    members = [L.class_of[h] in classes for h in range(len(L))]
    check_convex(L, members)
    dims = [1 if m else 0 for m in members]
    one = np.ones((1, 1), dtype=np.uint8)
    idx = lambda h, k: np.full((1, 1), L.index(h, k) % G.p, dtype=np.uint8)
    return from_rule(G, G.p, dims,
                     lambda h, k: idx(h, k) if members[h] and members[k] else None,
                     lambda h, k: one if members[h] and members[k] else None,
                     lambda i, h: one if members[h] else None)


def interval_classes(G, Q, R):
    """Classes of subgroups H with Q <=_G H <=_G R."""
    L = G.lattice
    qs = L.classes[L.class_of[Q]]
    rs = L.classes[L.class_of[R]]
    out = set()
    for h in range(len(L)):
        if any(L.inclusion[q, h] for q in qs) and any(L.inclusion[h, r] for r in rs):
            out.add(L.class_of[h])
    return out


def sigma_functor(G, Q, R):
    """Sigma_{Q,R}: the convex functor on the interval [Q, R] (up to conjugacy)."""
    return convex_functor(G, interval_classes(G, Q, R))


def over_functor(G, R, Q):
    """<R over Q> for Q < R of index p: socle S_Q, top S_R."""
    return sigma_functor(G, Q, R)


def under_functor(G, Q, R):
    """<Q over R>, the dual of <R over Q>: socle S_R, top S_Q."""
    return dual_functor(sigma_functor(G, Q, R))


def two_layer_sequence(G, Q, R):
    """0 -> S_Q -> <R over Q> -> S_R -> 0 as (inclusion, projection)."""
    L = G.lattice
    M = over_functor(G, R, Q)
    SQ, SR = simple_functor(G, Q), simple_functor(G, R)
    one = np.ones((1, 1), dtype=np.uint8)
    inc = MackeyMorphism(SQ, M, [one if SQ.dims[h] else fl.zeros(M.dims[h], 0) for h in range(len(L))])
    proj = MackeyMorphism(M, SR, [one if SR.dims[h] else fl.zeros(0, M.dims[h]) for h in range(len(L))])
    return inc, proj


def dual_morphism(f, source_dual=None, target_dual=None):
    """f* : N* -> M* for f : M -> N (components transposed)."""
    src = target_dual or dual_functor(f.target)
    tgt = source_dual or dual_functor(f.source)
    return MackeyMorphism(src, tgt, [c.T for c in f.components])


def dual_sequence(inc, proj):
    """The dual of 0 -> A -> B -> C -> 0: (proj*, inc*) for 0 -> C* -> B* -> A* -> 0.
    Simple functors are self-dual, so simple ends are kept as they are."""
    def dual_of(M):
        return M if _is_simple(M) else dual_functor(M)
    A, B, C = inc.source, inc.target, proj.target
    Bd = dual_functor(B)
    return dual_morphism(proj, source_dual=Bd, target_dual=dual_of(C)), \
        dual_morphism(inc, source_dual=dual_of(A), target_dual=Bd)


def _is_simple(M):
    L = M.lattice
    supp = [h for h in range(len(L)) if M.dims[h]]
    return bool(supp) and all(M.dims[h] == 1 for h in supp) and \
        set(supp) == set(L.classes[L.class_of[supp[0]]])


def tau_functor(G, phi):
    """T_phi for a homomorphism phi: G -> k+ given on the generators.

    Returns (T, inclusion S_1 -> T, projection T -> S_1).
    """
    p = G.p
    L = G.lattice
    words = G.words()
    val = [sum(phi[i] for i in words[g]) % p for g in range(G.order)]
    for g in range(G.order):
        for i, x in enumerate(G.generator_set):
            if val[G.mult[g, x]] != (val[g] + phi[i]) % p:
                raise ValueError("phi is not a homomorphism")
    if p == 2 and any(val[g] for g in range(1, G.order) if G.mult[g, g] == 0):
        raise ValueError("phi must vanish on involutions for the functor to be cohomological")
    dims = [2 if h == 0 else 0 for h in range(len(L))]

    def conj(i, h):
        if h:
            return None
        return np.array([[1, phi[i] % p], [0, 1]], dtype=np.uint8)
    T = from_rule(G, p, dims, lambda h, k: None, lambda h, k: None, conj)
    S1 = simple_functor(G, 0)
    inc = MackeyMorphism(S1, T, [np.array([[1], [0]], np.uint8) if h == 0 else fl.zeros(0, 0)
                                 for h in range(len(L))])
    proj = MackeyMorphism(T, S1, [np.array([[0, 1]], np.uint8) if h == 0 else fl.zeros(0, 0)
                                  for h in range(len(L))])
    return T, inc, proj


def dual_functor(M):
    G, L = M.group, M.lattice
    return from_rule(
        G, M.p, M.dims,
        lambda h, k: dense(M.r(h, k)).T,
        lambda h, k: dense(M.t(h, k)).T,
        lambda i, h: dense(M.c(int(G.inv[G.generator_set[i]]), L.conj(G.generator_set[i], h))).T)


# ---- morphisms ------------------------------------------------------------

class MackeyMorphism:
    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.p = source.p
        self.components = [fl.fp(np.asarray(c).reshape(target.dims[h], source.dims[h]), self.p)
                           for h, c in enumerate(components)]

    def component(self, h):
        return self.components[h]

    def __repr__(self):
        return f"MackeyMorphism({self.source!r} -> {self.target!r})"

    def then(self, other):
        """other o self"""
        return MackeyMorphism(self.source, other.target,
                              [fl.matmul(other.component(h), self.component(h), self.p)
                               for h in range(len(self.components))])

    def __add__(self, other):
        return MackeyMorphism(self.source, self.target,
                              [(a.astype(np.int64) + b) % self.p
                               for a, b in zip(self.components, other.components)])

    def scale(self, c):
        return MackeyMorphism(self.source, self.target,
                              [(a.astype(np.int64) * c) % self.p for a in self.components])

    def is_zero(self):
        return not any(c.any() for c in self.components)

    def is_iso(self):
        return all(fl.is_invertible(c, self.p) if c.size else c.shape[0] == c.shape[1]
                   for c in self.components)

    def check(self):
        """First failed commutation identity, or None."""
        M, N, p = self.source, self.target, self.p
        L = M.lattice
        f = self.components
        for h, k in L.covers:
            if not np.array_equal(fl.matmul(f[k], dense(M.t(h, k)), p), fl.matmul(dense(N.t(h, k)), f[h], p)):
                return f"transfer {h}->{k}"
            if not np.array_equal(fl.matmul(f[h], dense(M.r(h, k)), p), fl.matmul(dense(N.r(h, k)), f[k], p)):
                return f"restriction {k}->{h}"
        for x in M.group.generator_set:
            for h in range(len(L)):
                xh = L.conj(x, h)
                if not np.array_equal(fl.matmul(f[xh], dense(M.c(x, h)), p), fl.matmul(dense(N.c(x, h)), f[h], p)):
                    return f"conjugation by {x} at {h}"
        return None


def identity_morphism(M):
    return MackeyMorphism(M, M, [fl.identity(d) for d in M.dims])


def zero_morphism(M, N):
    return MackeyMorphism(M, N, [fl.zeros(N.dims[h], M.dims[h]) for h in range(len(M.dims))])


def _constraint_system(M, N):
    """Dense matrix whose kernel is the space of morphisms M -> N, with
    unknowns vec(f_H) (row-major) concatenated over subgroups."""
    L, G, p = M.lattice, M.group, M.p
    S = len(L)
    sizes = [N.dims[h] * M.dims[h] for h in range(S)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(off[-1])
    blocks = []  # (a, A, b, B): A vec(f_a) - B vec(f_b) = 0
    I = lambda n: np.eye(n, dtype=np.int64)
    d = lambda m: dense(m).astype(np.int64)
    for h, k in L.covers:
        if N.dims[k] * M.dims[h]:
            blocks.append((k, np.kron(I(N.dims[k]), d(M.t(h, k)).T), h, np.kron(d(N.t(h, k)), I(M.dims[h]))))
        if N.dims[h] * M.dims[k]:
            blocks.append((h, np.kron(I(N.dims[h]), d(M.r(h, k)).T), k, np.kron(d(N.r(h, k)), I(M.dims[k]))))
    for x in G.generator_set:
        for h in range(S):
            xh = L.conj(x, h)
            if N.dims[xh] * M.dims[h]:
                blocks.append((xh, np.kron(I(N.dims[xh]), d(M.c(x, h)).T), h, np.kron(d(N.c(x, h)), I(M.dims[h]))))
    nrows = sum(b[1].shape[0] for b in blocks)
    A = np.zeros((nrows, total), dtype=np.int64)
    r = 0
    for a, Aa, b, Bb in blocks:
        n = Aa.shape[0]
        A[r:r + n, off[a]:off[a + 1]] += Aa
        A[r:r + n, off[b]:off[b + 1]] -= Bb
        r += n
    return np.mod(A, p).astype(np.uint8), off, total


def hom_space(M, N):
    """Basis of Hom(M, N) as a list of MackeyMorphism."""
    if M.group is not N.group:
        raise GroupError("functors over different groups")
    A, off, total = _constraint_system(M, N)
    if total == 0:
        return []
    K = fl.nullspace(A, M.p) if A.shape[0] else fl.identity(total)
    out = []
    for v in K:
        comps = [v[off[h]:off[h + 1]].reshape(N.dims[h], M.dims[h]) for h in range(len(M.dims))]
        out.append(MackeyMorphism(M, N, comps))
    return out


def hom_dim(M, N):
    if M.group is not N.group:
        raise GroupError("functors over different groups")
    A, off, total = _constraint_system(M, N)
    if total == 0:
        return 0
    return total - (fl.rank(A, M.p) if A.shape[0] else 0)


def find_isomorphism(M, N, tries=64, seed=0):
    """An invertible morphism M -> N if one is found, else None.

    Exhaustive over combinations when the hom space is small, random
    combinations otherwise.
    """
    if M.dims != N.dims:
        return None
    basis = hom_space(M, N)
    if not basis:
        return None if M.total_dim else zero_morphism(M, N)
    p = M.p
    if p ** len(basis) <= 4096:
        coeffs = itertools.product(range(p), repeat=len(basis))
    else:
        rng = np.random.default_rng(seed)
        coeffs = (rng.integers(0, p, len(basis)) for _ in range(tries))
    for cs in coeffs:
        f = None
        for c, b in zip(cs, basis):
            if c:
                f = b.scale(c) if f is None else f + b.scale(c)
        if f is not None and f.is_iso():
            return f
    return None


def is_isomorphic(M, N):
    return find_isomorphism(M, N) is not None


# ---- kernels, images, cokernels -------------------------------------------

def subfunctor(M, bases):
    """Functor on the subspaces spanned by rows of bases[h] (RREF rows,
    must be stable under all maps).  Returns (functor, inclusion)."""
    G, L, p = M.group, M.lattice, M.p
    piv = [[int(np.flatnonzero(r)[0]) for r in B] for B in bases]
    dims = [B.shape[0] for B in bases]

    def induced(mat, src, dst):
        img = apply_rows(mat, bases[src], p)
        return fl.coords(bases[dst], piv[dst], img).T

    F = from_rule(G, p, dims,
                  lambda h, k: induced(M.t(h, k), h, k),
                  lambda h, k: induced(M.r(h, k), k, h),
                  lambda i, h: induced(M.c(G.generator_set[i], h), h, L.conj(G.generator_set[i], h)))
    inc = MackeyMorphism(F, M, [B.T for B in bases])
    return F, inc


def quotient_functor(M, bases):
    """M / N for a subfunctor N given by RREF row bases.  Returns
    (functor, projection)."""
    G, L, p = M.group, M.lattice, M.p
    piv = [[int(np.flatnonzero(r)[0]) for r in B] for B in bases]
    free = [[j for j in range(M.dims[h]) if j not in set(piv[h])] for h in range(len(L))]
    dims = [len(f) for f in free]
    proj = []
    for h in range(len(L)):
        P = fl.reduce_mod(fl.identity(M.dims[h]), bases[h], piv[h], p) if M.dims[h] else fl.zeros(0, 0)
        proj.append(P[:, free[h]].T if M.dims[h] else fl.zeros(0, 0))

    def induced(mat, src, dst):
        lift = fl.zeros(dims[src], M.dims[src])
        lift[np.arange(dims[src]), free[src]] = 1
        img = apply_rows(mat, lift, p)
        return apply_rows(proj[dst], img, p).T

    F = from_rule(G, p, dims,
                  lambda h, k: induced(M.t(h, k), h, k),
                  lambda h, k: induced(M.r(h, k), k, h),
                  lambda i, h: induced(M.c(G.generator_set[i], h), h, L.conj(G.generator_set[i], h)))
    return F, MackeyMorphism(M, F, proj)


def sub_quotient(phi, which):
    p = phi.p
    M, N = phi.source, phi.target
    if which == "kernel":
        return subfunctor(M, [fl.nullspace(phi.component(h), p) if M.dims[h] else fl.zeros(0, 0)
                              for h in range(len(M.dims))])
    imgs = [fl.row_space(phi.component(h).T, p) if N.dims[h] and M.dims[h] else fl.zeros(0, N.dims[h])
            for h in range(len(N.dims))]
    if which == "image":
        return subfunctor(N, imgs)
    if which == "cokernel":
        return quotient_functor(N, imgs)
    raise ValueError(which)


# ---- axioms ---------------------------------------------------------------

@dataclass
class AxiomReport:
    ok: bool = True
    failures: list = field(default_factory=list)

    @property
    def first(self):
        return self.failures[0] if self.failures else None

    def fail(self, msg):
        self.ok = False
        self.failures.append(msg)

    def __bool__(self):
        return self.ok


def _double_cosets_within(G, K, J, H):
    L = G.lattice
    reps, seen = [], set()
    je, he = L.elements[J], L.elements[H]
    for g in L.elements[K]:
        if g not in seen:
            reps.append(g)
            seen.update(G.mult[G.mult[je, g][:, None], he].ravel().tolist())
    return reps


def verify_axioms(M, stop_at_first=False):
    """Check chain independence, conjugation coherence, cohomologicality and
    the Mackey formula.  Failures name the violated identity."""
    rep = AxiomReport()
    G, L, p = M.group, M.lattice, M.p
    S = len(L)
    eq = lambda a, b: np.array_equal(dense(a), dense(b))

    def done():
        return stop_at_first and not rep.ok

    # chain independence: at each node all ways in from a cover agree
    for kind in ("t", "r"):
        for h in range(S):
            comp = {h: fl.identity(M.dims[h])}
            for k in sorted(L.overgroups(h), key=lambda s: L.orders[s]):
                if k == h:
                    continue
                cands = []
                for a in L.covers_below[k]:
                    if a in comp:
                        if kind == "t":
                            cands.append(fl.matmul(dense(M.cover_t(a, k)) if hasattr(M, "cover_t") else dense(M.t(a, k)), comp[a], p))
                        else:
                            cands.append(fl.matmul(comp[a], dense(M.cover_r(a, k)) if hasattr(M, "cover_r") else dense(M.r(a, k)), p))
                comp[k] = cands[0]
                if any(not eq(c, cands[0]) for c in cands[1:]):
                    rep.fail(f"chain independence of {'transfer' if kind == 't' else 'restriction'} {h}->{k}")
                    if done():
                        return rep
    # conjugation coherence
    for h in range(S):
        for x in L.generators(h):
            if not eq(M.c(x, h), fl.identity(M.dims[h])):
                rep.fail(f"c_(h,H) = id for h={x} in H={h}")
                if done():
                    return rep
    for g in range(G.order):
        for x in G.generator_set:
            for h in range(S):
                lhs = M.c(int(G.mult[x, g]), h)
                rhs = fl.matmul(dense(M.c(x, L.conj(g, h))), dense(M.c(g, h)), p)
                if not eq(lhs, rhs):
                    rep.fail(f"c_(xg) = c_x c_g for x={x}, g={g}, H={h}")
                    if done():
                        return rep
    for x in G.generator_set:
        for h, k in L.covers:
            xh, xk = L.conj(x, h), L.conj(x, k)
            if not eq(fl.matmul(dense(M.c(x, k)), dense(M.t(h, k)), p), fl.matmul(dense(M.t(xh, xk)), dense(M.c(x, h)), p)):
                rep.fail(f"conjugation commutes with transfer {h}->{k} (x={x})")
            if not eq(fl.matmul(dense(M.c(x, h)), dense(M.r(h, k)), p), fl.matmul(dense(M.r(xh, xk)), dense(M.c(x, k)), p)):
                rep.fail(f"conjugation commutes with restriction {k}->{h} (x={x})")
            if done():
                return rep
    # cohomological
    for h in range(S):
        for k in L.overgroups(h):
            lhs = fl.matmul(dense(M.t(h, k)), dense(M.r(h, k)), p)
            rhs = (fl.identity(M.dims[k]).astype(np.int64) * (L.index(h, k) % p)) % p
            if not eq(lhs, rhs):
                rep.fail(f"cohomological t r = |K:H| for H={h}, K={k}")
                if done():
                    return rep
    # Mackey formula
    for k in range(S):
        subs = L.subgroups_of(k)
        for h in subs:
            for j in subs:
                lhs = fl.matmul(dense(M.r(j, k)), dense(M.t(h, k)), p)
                rhs = np.zeros((M.dims[j], M.dims[h]), dtype=np.int64)
                for x in _double_cosets_within(G, k, j, h):
                    xi = int(G.inv[x])
                    a = L.meet(L.conj(xi, j), h)      # J^x cap H
                    b = L.conj(x, a)                  # J cap xH
                    term = fl.matmul(dense(M.t(b, j)), fl.matmul(dense(M.c(x, a)), dense(M.r(a, h)), p), p)
                    rhs = rhs + term
                if not eq(lhs, rhs % p):
                    rep.fail(f"Mackey formula for H={h}, J={j}, K={k}")
                    if done():
                        return rep
    return rep


# ---- random instances ----------------------------------------------------

def random_functor(G, rng, max_summands=2):
    """A random functor from the standard constructions: simples, interval
    functors Sigma_{Q,R}, FP of permutation modules and of Omega_G, their
    duals and direct sums.  rng is a numpy Generator."""
    L = G.lattice
    reps = L.class_reps

    def one():
        kind = int(rng.integers(5))
        if kind == 0:
            return simple_functor(G, int(rng.choice(reps)))
        if kind == 1:
            q = int(rng.choice(reps))
            r = int(rng.choice([s for s in range(len(L)) if L.inclusion[q, s]]))
            return sigma_functor(G, q, r)
        if kind == 2:
            return fixed_point_functor(perm_module(G, int(rng.choice(reps))))
        if kind == 3:
            return fixed_point_functor(augmentation_kernel(G)) if G.order > 1 else simple_functor(G, 0)
        return dual_functor(one())

    parts = [one() for _ in range(int(rng.integers(1, max_summands + 1)))]
    return parts[0] if len(parts) == 1 else direct_sum(*parts)
