"""Minimal projective resolutions, Ext dimensions, Ext classes with Yoneda
products, exactness checks and growth classification.

A resolution is stored as a list of ProjectiveMorphisms d_n : P_n -> P_{n-1}
(d_0 : P_0 -> M is the augmentation).  Each d_n is given by the images of the
generators of P_n, which are chosen at conjugacy class representatives Q as
elements of the current syzygy N(Q) independent modulo its radical

    Rad N(Q) = sum_{L<.Q} t(N(L)) + sum_{Q<.L} r(N(L)) + sum_x (c_x - 1) N(Q),

x running over generators of N_G(Q).  Tops chosen this way make every cover
minimal, so m_n[Q] = dim Ext^n(M, S_Q) can be read off the terms.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import fplinalg as fl
from .mackey import MackeyMorphism, apply_rows, dense, simple_functor
from .projective import ProjectiveFunctor, ProjectiveMorphism

CACHE_FORMAT = 1
DEFAULT_MAX_DIM = 400_000


class ResolutionGuard(RuntimeError):
    """A resolution term would exceed the dimension guard."""

    def __init__(self, degree, dim, limit):
        super().__init__(f"term P_{degree} has total dimension {dim} > guard {limit}; "
                         f"computed through degree {degree - 1}")
        self.degree_reached = degree - 1


# ---- covers ---------------------------------------------------------------

def _radical(A, N, q, p):
    """RREF basis of the radical of the subfunctor N of A at subgroup q."""
    L = A.lattice
    parts = []
    for l in L.covers_below[q]:
        if len(N[l]):
            parts.append(apply_rows(A.t(l, q), N[l], p))
    for l in L.covers_above[q]:
        if len(N[l]):
            parts.append(apply_rows(A.r(q, l), N[l], p))
    if len(N[q]):
        for x in L.generators(L.normalizer[q]):
            parts.append((apply_rows(A.c(x, q), N[q], p).astype(np.int64) - N[q]) % p)
    if not parts:
        return fl.zeros(0, A.dims[q]), []
    return fl.rref(np.vstack(parts), p)


def top_generators(A, N, p):
    """Generators of the subfunctor N of A (bases per subgroup) modulo its
    radical: list of (class rep, vector of A(rep))."""
    L = A.lattice
    out = []
    for q in L.class_reps:
        if not len(N[q]):
            continue
        R, piv = _radical(A, N, q, p)
        red = fl.reduce_mod(N[q], R, piv, p)
        for i in fl.independent_rows(red, p):
            out.append((q, N[q][i]))
    return out


def _cover(A, N, p):
    gens = top_generators(A, N, p)
    gens.sort(key=lambda g: g[0])
    P = ProjectiveFunctor(A.group, p, [q for q, _ in gens])
    return P, ProjectiveMorphism(P, A, [v for _, v in gens])


def projective_cover(M):
    """(multiplicities by class rep, P, cover morphism P -> M)."""
    N = [fl.identity(d) for d in M.dims]
    P, eps = _cover(M, N, M.p)
    return P.multiplicities(), P, eps


def _kernels(d, p):
    P = d.source
    return [fl.nullspace(d.component(h), p) if P.dims[h] else fl.zeros(0, 0)
            for h in range(len(P.dims))]


# ---- cache ----------------------------------------------------------------

def default_cache_dir():
    env = os.environ.get("COMACK_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "comack")


def subject_key(M):
    """Stable key for (group, functor data)."""
    h = hashlib.sha1()
    h.update(f"v{CACHE_FORMAT}|{M.group.spec_string}|{M.p}|".encode())
    if hasattr(M, "to_json"):
        h.update(M.to_json().encode())
    else:
        h.update(repr(M.multiplicities()).encode())
    return h.hexdigest()[:20]


class ResolutionCache:
    """One directory per subject, one .npz per degree holding the generator
    classes and generator images.  Writes go to a temp file then rename."""

    def __init__(self, root=None):
        self.root = root or default_cache_dir()

    def _dir(self, key):
        return os.path.join(self.root, f"res-v{CACHE_FORMAT}", key)

    def load(self, key, n):
        path = os.path.join(self._dir(key), f"deg{n}.npz")
        if not os.path.exists(path):
            return None
        with np.load(path) as z:
            gens = z["gens"].tolist()
            flat, offs = z["flat"], z["offs"]
        return gens, [flat[offs[i]:offs[i + 1]] for i in range(len(gens))]

    def store(self, key, n, gens, images):
        d = self._dir(key)
        os.makedirs(d, exist_ok=True)
        offs = np.concatenate([[0], np.cumsum([len(v) for v in images])]).astype(np.int64)
        flat = np.concatenate(images).astype(np.uint8) if images else np.zeros(0, np.uint8)
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        with os.fdopen(fd, "wb") as f:
            np.savez(f, gens=np.array(gens, dtype=np.int64), flat=flat, offs=offs)
        os.replace(tmp, os.path.join(d, f"deg{n}.npz"))

    def entries(self):
        base = os.path.join(self.root, f"res-v{CACHE_FORMAT}")
        if not os.path.isdir(base):
            return []
        out = []
        for key in sorted(os.listdir(base)):
            degs = sorted(int(f[3:-4]) for f in os.listdir(os.path.join(base, key)) if f.endswith(".npz"))
            out.append((key, degs))
        return out

    def clear(self):
        import shutil
        base = os.path.join(self.root, f"res-v{CACHE_FORMAT}")
        n = len(self.entries())
        shutil.rmtree(base, ignore_errors=True)
        return n


# ---- resolutions ----------------------------------------------------------

class Resolution:
    """Minimal projective resolution of a functor, extended on demand."""

    def __init__(self, subject, max_dim=DEFAULT_MAX_DIM, cache=None):
        self.subject = subject
        self.p = subject.p
        self.lattice = subject.lattice
        self.max_dim = max_dim
        self.cache = cache
        self.key = subject_key(subject) if cache is not None else None
        self.boundaries = []  # d_0 = augmentation, d_n : P_n -> P_{n-1}
        self._syzygy = [fl.identity(d) for d in subject.dims]
        self._ambient = subject

    @property
    def projectives(self):
        return [d.source for d in self.boundaries]

    @property
    def augmentation(self):
        return self.boundaries[0]

    @property
    def max_degree(self):
        return len(self.boundaries) - 1

    def term(self, n):
        self.extend(n)
        return self.boundaries[n].source

    def terms(self):
        """Multiplicity vectors: list of {class rep: m_n[Q]}."""
        return [d.source.multiplicities() for d in self.boundaries]

    def multiplicity(self, n, q):
        self.extend(n)
        q = self.lattice.rep(q)
        return self.boundaries[n].source.multiplicities().get(q, 0)

    def _next(self):
        n = len(self.boundaries)
        A = self._ambient
        cached = self.cache.load(self.key, n) if self.cache is not None else None
        if cached is not None:
            gens, images = cached
            P = ProjectiveFunctor(A.group, self.p, gens)
            d = ProjectiveMorphism(P, A, images)
        else:
            P, d = _cover(A, self._syzygy, self.p)
        if P.total_dim > self.max_dim:
            raise ResolutionGuard(n, P.total_dim, self.max_dim)
        if cached is None and self.cache is not None:
            self.cache.store(self.key, n, P.gens, d.images)
        self.boundaries.append(d)
        self._syzygy = _kernels(d, self.p)
        self._ambient = P
        # surjectivity onto the previous syzygy, pointwise
        prev = self._syzygy_dims_prev
        for h in range(len(P.dims)):
            if P.dims[h] - len(self._syzygy[h]) != prev[h]:
                raise AssertionError(f"cover in degree {n} is not onto at subgroup {h}")
        self._syzygy_dims_prev = [len(k) for k in self._syzygy]

    def extend(self, n_max):
        if not hasattr(self, "_syzygy_dims_prev"):
            self._syzygy_dims_prev = [len(b) for b in self._syzygy]
        while len(self.boundaries) <= n_max:
            self._next()
        return self

    def ext_dims(self, q, n_max=None):
        """dim Ext^n(subject, S_q) for n = 0..n_max."""
        n_max = self.max_degree if n_max is None else n_max
        self.extend(n_max)
        return [self.multiplicity(n, q) for n in range(n_max + 1)]

    def check_exact(self, n_max=None):
        """Pointwise exactness of P_n -> ... -> P_0 -> M -> 0 (report)."""
        n_max = self.max_degree if n_max is None else n_max
        chain = list(reversed(self.boundaries[:n_max + 1]))
        return verify_exact(chain, injective_start=False, surjective_end=True)

    def check_minimal(self, n_max=None):
        """Each boundary induces zero on Hom(-, S_Q): the image of d_n lies in
        the radical of P_{n-1}, tested on generator images."""
        n_max = self.max_degree if n_max is None else n_max
        p = self.p
        for n in range(1, n_max + 1):
            d = self.boundaries[n]
            P = d.target
            full = [fl.identity(x) for x in P.dims]
            for i, q in enumerate(d.source.gens):
                R, piv = _radical(P, full, q, p)
                if fl.reduce_mod(d.images[i][None, :], R, piv, p).any():
                    return False
        return True


_RES_MEMO = {}


def minimal_resolution(M, n_max, max_dim=DEFAULT_MAX_DIM, cache=None):
    """Minimal resolution of M through degree n_max.  Resolutions are
    memoized per functor object so repeated queries extend the same one."""
    res = _RES_MEMO.get(id(M))
    if res is None or res.subject is not M:
        res = Resolution(M, max_dim=max_dim, cache=cache)
        _RES_MEMO[id(M)] = res
    res.max_dim = max_dim
    if cache is not None and (res.cache is None or res.cache.root != cache.root):
        # attach the cache and persist the degrees computed so far
        res.cache, res.key = cache, subject_key(M)
        for n, d in enumerate(res.boundaries):
            if cache.load(res.key, n) is None:
                cache.store(res.key, n, d.source.gens, d.images)
    return res.extend(n_max)


def simple_resolution(G, q, n_max, **kw):
    """Resolution of S_q, shared across calls for the same group and class."""
    L = G.lattice
    key = ("simple", L.rep(q))
    if key not in G._derived:
        G._derived[key] = simple_functor(G, L.rep(q))
    return minimal_resolution(G._derived[key], n_max, **kw)


def ext_dimensions(M, n_max, **kw):
    """{class rep: [dim Ext^n(M, S_Q) for n <= n_max]}."""
    res = minimal_resolution(M, n_max, **kw)
    return {q: res.ext_dims(q, n_max) for q in M.lattice.class_reps}


def ext_simple(G, q, r, n_max, **kw):
    """dims of Ext^n(S_q, S_r) for n <= n_max."""
    return simple_resolution(G, q, n_max, **kw).ext_dims(r, n_max)


@dataclass
class ExtTable:
    group: str
    p: int
    source: str
    target: str
    dims: list
    provenance: str = "resolution"

    def to_dict(self):
        return {"group": self.group, "p": self.p, "source": self.source, "target": self.target,
                "degrees": list(range(len(self.dims))), "dims": list(self.dims),
                "provenance": self.provenance}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self):
        rows = ["degree,dim"] + [f"{n},{d}" for n, d in enumerate(self.dims)]
        return "\n".join(rows) + "\n"


# ---- Ext classes ----------------------------------------------------------

class ExtClass:
    """A class in Ext^n(source, target) given by a cocycle P_n -> target,
    where P is the minimal resolution of source."""

    def __init__(self, resolution, target, degree, cocycle):
        self.resolution = resolution
        self.source = resolution.subject
        self.target = target
        self.degree = degree
        self.cocycle = cocycle  # ProjectiveMorphism P_degree -> target
        self.p = resolution.p

    @classmethod
    def from_images(cls, resolution, target, degree, images):
        resolution.extend(degree + 1)
        P = resolution.term(degree)
        return cls(resolution, target, degree, ProjectiveMorphism(P, target, images))

    def __add__(self, other):
        if other.degree != self.degree or list(other.target.dims) != list(self.target.dims):
            raise ValueError("classes live in different Ext groups")
        p = self.p
        return ExtClass(self.resolution, self.target, self.degree,
                        ProjectiveMorphism(self.cocycle.source, self.target,
                                           [(a.astype(np.int64) + b) % p for a, b in
                                            zip(self.cocycle.images, other.cocycle.images)]))

    def __sub__(self, other):
        return self + other.scale(self.p - 1)

    def scale(self, c):
        p = self.p
        return ExtClass(self.resolution, self.target, self.degree,
                        ProjectiveMorphism(self.cocycle.source, self.target,
                                           [(a.astype(np.int64) * c) % p for a in self.cocycle.images]))

    def is_cocycle(self):
        """cocycle o d_{n+1} = 0."""
        self.resolution.extend(self.degree + 1)
        d = self.resolution.boundaries[self.degree + 1]
        return not any(self.cocycle.apply(d.source.gens[i], v[None, :]).any()
                       for i, v in enumerate(d.images))

    def coboundaries(self):
        """Generator-image vectors (flattened) spanning {g o d_n}."""
        n = self.degree
        T = self.target
        if n == 0:
            P = self.cocycle.source
            return fl.zeros(0, sum(T.dims[q] for q in P.gens))
        d = self.resolution.boundaries[n]
        Pm = d.target
        rows = []
        for i, q in enumerate(Pm.gens):
            for a in range(T.dims[q]):
                imgs = [fl.zeros(1, T.dims[x])[0] for x in Pm.gens]
                imgs[i][a] = 1
                g = ProjectiveMorphism(Pm, T, imgs)
                rows.append(np.concatenate([g.apply(d.source.gens[j], v[None, :])[0]
                                            for j, v in enumerate(d.images)]
                                           or [fl.zeros(1, 0)[0]]))
        if not rows:
            return fl.zeros(0, sum(T.dims[q] for q in d.source.gens))
        return np.vstack(rows)

    def vector(self):
        imgs = self.cocycle.images
        return np.concatenate(imgs) if imgs else fl.zeros(1, 0)[0]

    def is_zero(self):
        v = self.vector()
        if not v.any():
            return True
        B = self.coboundaries()
        if not len(B):
            return False
        R, piv = fl.rref(B, self.p)
        return not fl.reduce_mod(v[None, :], R, piv, self.p).any()

    def __repr__(self):
        return f"ExtClass(degree={self.degree}, vector={self.vector().tolist()})"


def ext_basis(resolution, q, n):
    """Basis of Ext^n(subject, S_q) as ExtClasses: one per generator of P_n at
    the class of q (the Hom differentials vanish by minimality)."""
    G = resolution.subject.group
    L = G.lattice
    q = L.rep(q)
    key = ("simple", q)
    if key not in G._derived:
        G._derived[key] = simple_functor(G, q)
    S = G._derived[key]
    P = resolution.term(n)
    out = []
    for i, g in enumerate(P.gens):
        if g == q:
            imgs = [fl.zeros(1, S.dims[x])[0] for x in P.gens]
            imgs[i][0] = 1
            out.append(ExtClass(resolution, S, n, ProjectiveMorphism(P, S, imgs)))
    return out


def _solve_image(f, h, y, p):
    """x with f.component(h) x = y, or raise."""
    A = dense(f.component(h))
    if A.shape[1] == 0:
        if np.asarray(y).any():
            raise ValueError("lift does not exist")
        return fl.zeros(1, 0)[0]
    x, ok = fl.solve(A, np.asarray(y, dtype=np.uint8), p)
    if not ok:
        raise ValueError("lift does not exist")
    return x


def lift_chain_map(start, target_res, steps):
    """Lift a morphism start : P_n(source) -> N (a ProjectiveMorphism with
    target the subject of target_res) to phi_k : P_{n+k} -> Q_k for
    k = 0..steps.  Among solutions the one with free variables zero is taken."""
    res = start.source_resolution
    n = start.degree
    p = res.p
    res.extend(n + steps + 1)
    target_res.extend(steps + 1)
    maps = []
    prev = None
    for k in range(steps + 1):
        P = res.term(n + k)
        Qk = target_res.term(k)
        f = target_res.boundaries[k]
        imgs = []
        for i, q in enumerate(P.gens):
            if k == 0:
                y = start.cocycle.images[i]
            else:
                y = prev.apply(q, res.boundaries[n + k].images[i][None, :])[0]
            imgs.append(_solve_image(f, q, y, p))
        prev = ProjectiveMorphism(P, Qk, imgs)
        maps.append(prev)
    return maps


def yoneda_product(e, f):
    """f . e : for e in Ext^n(M, N) and f in Ext^m(N, L), the class in
    Ext^{n+m}(M, L) obtained by lifting e through m steps of the resolution
    of N and composing with f's cocycle (rightmost factor acts first)."""
    if list(f.source.dims) != list(e.target.dims):
        raise ValueError("middle functors differ")
    e.source_resolution = e.resolution
    m = f.degree
    phis = lift_chain_map(e, f.resolution, m)
    phi = phis[m]
    res = e.resolution
    P = res.term(e.degree + m)
    imgs = [f.cocycle.apply(q, phi.images[i][None, :])[0] for i, q in enumerate(P.gens)]
    return ExtClass(res, f.target, e.degree + m, ProjectiveMorphism(P, f.target, imgs))


def compose(a, b):
    """a . b : b acts first (b's target is a's source)."""
    return yoneda_product(b, a)


def identity_class(res):
    """The class of id in Ext^0(M, M)."""
    eps = res.augmentation
    return ExtClass(res, res.subject, 0, eps)


def splice_sequences(seqs):
    """Long exact sequence from short exact sequences given left to right
    as (inclusion, projection) pairs: 0->N->E_n->...->E_1->M->0 where the
    last pair ends at M.  Returns the chain of maps in arrow order."""
    chain = [seqs[0][0]]
    for (i_next, p_prev) in zip((s[0] for s in seqs[1:]), (s[1] for s in seqs[:-1])):
        chain.append(p_prev.then(i_next))
    chain.append(seqs[-1][1])
    return chain


def splice_class(chain, resolution=None):
    """Class in Ext^n(M, N) of an exact sequence 0 -> N -> E_n -> ... -> E_1 -> M -> 0
    given as the list of its n+1 maps in arrow order (or as short exact
    sequences, see splice_sequences).  Computed by lifting id_M along the
    resolution of M into the sequence."""
    if chain and isinstance(chain[0], tuple):
        chain = splice_sequences(chain)
    rep = verify_exact(chain, injective_start=True, surjective_end=True)
    if not rep.ok:
        raise ValueError(f"sequence is not exact: {rep.first}")
    M = chain[-1].target
    N = chain[0].source
    n = len(chain) - 1
    res = resolution or minimal_resolution(M, n + 1)
    res.extend(n + 1)
    p = res.p
    maps = list(reversed(chain))  # f_0 : E_1 -> M, ..., f_n : N -> E_n
    prev = None
    for k in range(n + 1):
        P = res.term(k)
        f = maps[k]
        imgs = []
        for i, q in enumerate(P.gens):
            if k == 0:
                y = res.boundaries[0].images[i]
            else:
                y = prev.apply(q, res.boundaries[k].images[i][None, :])[0]
            imgs.append(_solve_image(f, q, y, p))
        prev = ProjectiveMorphism(P, f.source, imgs)
    return ExtClass(res, N, n, prev)


def gamma_class(G, X, resolution=None):
    """gamma_X in Ext^2(S_1, S_1): splice of the two-layer sequence
    0 -> S_1 -> <X over 1> -> S_X -> 0 with its dual."""
    from .mackey import dual_sequence, two_layer_sequence
    seq = two_layer_sequence(G, 0, X)
    return splice_class([seq, dual_sequence(*seq)], resolution=resolution or simple_resolution(G, 0, 3))


# ---- exactness ------------------------------------------------------------

@dataclass
class ExactReport:
    ok: bool
    failures: list = field(default_factory=list)

    @property
    def first(self):
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok


def verify_exact(chain, injective_start=True, surjective_end=True):
    """Check that X_0 -> X_1 -> ... -> X_k (maps in arrow order) is exact at
    every interior node and subgroup; optionally also 0 -> X_0 and X_k -> 0.
    Failures name the node (index of the object) and subgroup."""
    fails = []
    p = chain[0].p
    S = len(chain[0].source.dims)
    for i in range(len(chain) - 1):
        f, g = chain[i], chain[i + 1]
        for h in range(S):
            A, B = dense(f.component(h)), dense(g.component(h))
            if A.size and B.size and fl.matmul(B, A, p).any():
                fails.append(f"node {i + 1}, subgroup {h}: composite is nonzero")
                continue
            dim = f.target.dims[h]
            ra = fl.rank(A, p) if A.size else 0
            rb = fl.rank(B, p) if B.size else 0
            if ra + rb != dim:
                fails.append(f"node {i + 1}, subgroup {h}: image dim {ra} != kernel dim {dim - rb}")
    if injective_start:
        f = chain[0]
        for h in range(S):
            A = dense(f.component(h))
            if (fl.rank(A, p) if A.size else 0) != f.source.dims[h]:
                fails.append(f"node 0, subgroup {h}: first map not injective")
    if surjective_end:
        f = chain[-1]
        for h in range(S):
            A = dense(f.component(h))
            if (fl.rank(A, p) if A.size else 0) != f.target.dims[h]:
                fails.append(f"node {len(chain)}, subgroup {h}: last map not surjective")
    return ExactReport(not fails, fails)


def to_mackey_morphism(f):
    """Materialize any morphism with component(h) into a MackeyMorphism."""
    if isinstance(f, MackeyMorphism):
        return f
    return f.to_morphism()


# ---- growth ---------------------------------------------------------------

@dataclass
class GrowthReport:
    classification: str  # bounded | polynomial | exponential | inconclusive
    value: float  # fitted degree or ratio (0 for bounded)
    window: list  # (degree, dim) pairs used
    stride: int = 1
    note: str = "finite-window evidence, not a proof"

    def to_dict(self):
        return {"classification": self.classification, "value": self.value,
                "window": [list(w) for w in self.window], "stride": self.stride,
                "note": self.note}


def growth_classify(series, window=4, eps=0.1, slope_spread=0.5):
    """Heuristic growth class of a dimension sequence.

    The sequence is compressed to the degrees n0 + k*s, n0 the first nonzero
    degree and s the gcd of gaps between nonzero degrees (so 1,0,4,0,13,...
    is read along even degrees).  On the last `window` terms:
      bounded      the terms are constant;
      polynomial   local log-log slopes vary by at most slope_spread
                   (value = last slope);
      exponential  otherwise, if every consecutive ratio exceeds 1+eps and
                   max/min ratio is at most 1+eps (value = last ratio);
      inconclusive otherwise.
    """
    a = [int(x) for x in series]
    if len(a) < 6:
        raise ValueError("need at least 6 terms")
    nz = [n for n, x in enumerate(a) if x]
    if not nz:
        return GrowthReport("bounded", 0.0, [(n, 0) for n in range(len(a))[-window:]])
    n0 = nz[0]
    s = 0
    for n in nz[1:]:
        s = math.gcd(s, n - n0)
    s = s or 1
    degs = list(range(n0, len(a), s))
    tail = [(n, a[n]) for n in degs][-window:]
    vals = [v for _, v in tail]
    if len(set(vals)) == 1:
        return GrowthReport("bounded", 0.0, tail, s)
    if all(v > 0 for v in vals):
        # positions counted from the first nonzero degree, starting at 1;
        # slopes are tested first since slowly growing polynomial tails also
        # have nearly constant ratios
        pos = [(n - n0) // s + 1 for n, _ in tail]
        slopes = [math.log(b / a_) / math.log(y / x)
                  for (x, a_), (y, b) in zip(zip(pos, vals), zip(pos[1:], vals[1:]))]
        if max(slopes) - min(slopes) <= slope_spread:
            return GrowthReport("polynomial", slopes[-1], tail, s)
        ratios = [b / a_ for a_, b in zip(vals, vals[1:])]
        if min(ratios) > 1 + eps and max(ratios) / min(ratios) <= 1 + eps:
            return GrowthReport("exponential", ratios[-1], tail, s)
    return GrowthReport("inconclusive", 0.0, tail, s)
