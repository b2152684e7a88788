"""Closed-form dimension predictions and combinatorial oracles for Ext
groups between simple functors.  All arithmetic is on Python integers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .groups import (GroupError, complements, elementary_abelian_rank, is_cyclic,
                     nu_invariant, quotient_group, subgroup_as_group)


@dataclass
class DimPrediction:
    source: str
    params: dict
    dims: list = field(default_factory=list)
    degree: int = None  # for single (degree, dim) predictions
    value: int = None
    conjectural: bool = False

    def to_dict(self):
        d = {"source": "formula", "formula": self.source, "params": self.params,
             "conjectural": self.conjectural}
        if self.dims:
            d["degrees"] = list(range(len(self.dims)))
            d["dims"] = list(self.dims)
        if self.degree is not None:
            d["degree"] = self.degree
            d["dim"] = self.value
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


# ---- series ---------------------------------------------------------------

def series_inverse_product(factors, n_max):
    """Coefficients of 1 / prod_i f_i(t) up to t^n_max, each f_i given as a
    list of integer coefficients with constant term 1."""
    out = [1] + [0] * n_max
    for f in factors:
        if f[0] != 1:
            raise ValueError("constant term must be 1")
        # divide out by f: a_n = b_n - sum_{k>=1} f_k a_{n-k}
        new = [0] * (n_max + 1)
        for n in range(n_max + 1):
            s = out[n]
            for k in range(1, min(len(f) - 1, n) + 1):
                s -= f[k] * new[n - k]
            new[n] = s
        out = new
    return out


def poincare_closed_form(kind, p, m, n_max):
    """elemab2: 1/((1-t^2)(1-3t^2)...(1-(2^{m-1}-1)t^2)) for (C2)^m.
    p3: 1/((1-t)(1-t-(p-1)t^2)...(1-t-(p^{m-1}-1)t^2)) for (C_p)^m,
    proved for p = 3 and flagged conjectural for p > 3."""
    if kind == "elemab2":
        if p != 2:
            raise ValueError("elemab2 needs p = 2")
        factors = [[1, 0, -(2 ** i - 1)] for i in range(1, m)]
        conj = False
    elif kind == "p3":
        if p % 2 == 0:
            raise ValueError("p3 needs p odd")
        factors = [[1, -1]] if m >= 1 else []
        factors += [[1, -1, -(p ** i - 1)] for i in range(1, m)]
        conj = p > 3
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return DimPrediction(kind, {"p": p, "m": m}, series_inverse_product(factors, n_max), conjectural=conj)


def self_ext_series(G, n_max, resolve=False):
    """dim Ext^n(S_1, S_1) over G from the closed forms when G is trivial,
    cyclic, elementary abelian of exponent 2 or of exponent 3; otherwise
    computed from a resolution when resolve is set.  Returns (dims, provenance)."""
    if G.order == 1:
        return [1] + [0] * n_max, "trivial group"
    if is_cyclic(G):
        if G.order == 2:
            return [1] + [0] * n_max, "cyclic of order 2"
        return [1] * (n_max + 1), "cyclic"
    m = elementary_abelian_rank(G)
    if m is not None and G.p == 2:
        return poincare_closed_form("elemab2", 2, m, n_max).dims, "elemab2"
    if m is not None and G.p == 3:
        return poincare_closed_form("p3", 3, m, n_max).dims, "p3"
    if resolve:
        from .homological import ext_simple
        return ext_simple(G, 0, 0, n_max), "resolution"
    raise GroupError(f"no closed form for Ext(S_1,S_1) over {G.spec_string}")


# ---- subgroup helpers -----------------------------------------------------

def z_subgroup(G, H, X):
    """Z_G(H, X) = {g : [g, X] <= H}."""
    L = G.lattice
    hm = set(int(x) for x in L.elements[H])
    xs = L.elements[X]
    els = [g for g in range(G.order) if all(G.commutator(g, int(x)) in hm for x in xs)]
    return L.subgroup_from_elements(els)


def rank_of(L, s):
    """log_p |s| (for elementary abelian s this is its rank)."""
    return L.rank(s)


def _check_elemab_normal(L, s):
    if not L.is_elementary_abelian(s) or not L.is_normal(s):
        raise GroupError("subgroup must be elementary abelian and normal")


# ---- Steinberg ------------------------------------------------------------

def steinberg_dim(G, Q, H):
    """(q-h, p^C(q-h,2) / |N_G(H) : Z_G(H,Q)|): degree and dimension of the
    first nonzero Ext^n(S_Q, S_H)."""
    L = G.lattice
    _check_elemab_normal(L, Q)
    if not L.leq(H, Q):
        raise GroupError("H must lie in Q")
    p = G.p
    d = rank_of(L, Q) - rank_of(L, H)
    N = L.normalizer[H]
    Z = z_subgroup(G, H, Q)
    idx = L.orders[N] // L.orders[Z]
    num = p ** comb(d, 2)
    if num % idx:
        raise ArithmeticError("index does not divide the Steinberg dimension")
    return DimPrediction("steinberg", {"group": G.spec_string, "Q": Q, "H": H},
                         degree=d, value=num // idx)


def invariant_flag(G, Q, H):
    """A maximal N_G(H)-invariant flag H = H_0 < H_1 < ... < H_{q-h} = Q with
    steps of index p (smallest subgroup id at each step)."""
    L = G.lattice
    N = L.normalizer[H]
    flag = [H]
    while flag[-1] != Q:
        cur = flag[-1]
        nxt = [s for s in L.covers_above[cur] if L.leq(s, Q) and L.is_normal(s, ambient=N)]
        if not nxt:
            raise GroupError("no invariant extension of the flag")
        flag.append(min(nxt))
    return flag


def flag_count_oracle(G, Q, H, flag=None):
    """Number of N_G(H)-classes of flags X_1 > ... > X_{d-1} of Q (d = q-h)
    with X_i H_i = Q and X_i cap H_i = H, by enumeration."""
    L = G.lattice
    flag = flag or invariant_flag(G, Q, H)
    d = len(flag) - 1
    if d <= 1:
        return 1
    found = []

    def extend(chain):
        i = len(chain) + 1
        if i == d:
            found.append(tuple(chain))
            return
        Hi = flag[i]
        above = chain[-1] if chain else Q
        for X in L.subgroups_of(above):
            if X == above:
                continue
            if L.join(X, Hi) == Q and L.meet(X, Hi) == H:
                extend(chain + [X])
    extend([])
    NH = L.elements[L.normalizer[H]]
    canon = {min(tuple(L.conj(int(g), X) for X in f) for g in NH) for f in found}
    return len(canon)


# ---- factor Ext recursion -------------------------------------------------

def _quotient_by(G, A, B):
    """The group A/B for B normal in A (subgroup ids of G), with maps."""
    from .change import ambient_to_sub
    Ag, _ = subgroup_as_group(G, A)
    return quotient_group(Ag, ambient_to_sub(G, A)[B])[0]


def factor_ext_recursion(G, Q, R, n_max, base_tables=None, resolve=False):
    """Predicted dim Ext^n(S_Q, S_R), n <= n_max, for elementary abelian
    normal Q, R centralizing each other:

        sum over H <= Q cap R up to conjugacy of
        p^{C(q-h,2)+C(r-h,2)} / |N_G(H) : Z_G(H,QR)| * e_{Z_H}(n + 2h - q - r)

    with Z_H = Z_G(H,QR)/H and e_C the self-Ext series of S_1 over C.
    base_tables maps H -> list of dims to override the closed forms."""
    L = G.lattice
    p = G.p
    _check_elemab_normal(L, Q)
    _check_elemab_normal(L, R)
    if L.commutator_subgroup(Q, R) != 0:
        raise GroupError("Q and R must centralize each other")
    q, r = rank_of(L, Q), rank_of(L, R)
    QR = L.join(Q, R)
    QcR = L.meet(Q, R)
    dims = [0] * (n_max + 1)
    terms = []
    seen = set()
    for H in L.subgroups_of(QcR):
        c = L.class_of[H]
        if c in seen:
            continue
        seen.add(c)
        h = rank_of(L, H)
        Z = z_subgroup(G, H, QR)
        idx = L.orders[L.normalizer[H]] // L.orders[Z]
        num = p ** (comb(q - h, 2) + comb(r - h, 2))
        if num % idx:
            raise ArithmeticError("index does not divide the Steinberg weight")
        w = num // idx
        shift = q + r - 2 * h
        need = n_max - shift
        if need < 0:
            continue
        if base_tables and H in base_tables:
            base, prov = list(base_tables[H]), "given"
        else:
            base, prov = self_ext_series(_quotient_by(G, Z, H), need, resolve=resolve)
        for n in range(shift, n_max + 1):
            dims[n] += w * base[n - shift]
        terms.append({"H": H, "weight": w, "shift": shift, "base": prov})
    return DimPrediction("factor-ext", {"group": G.spec_string, "Q": Q, "R": R, "terms": terms}, dims)


# ---- general reduction ----------------------------------------------------

@dataclass
class ReductionInstance:
    group: object  # N_G(R, gQ) / Phi(R gQ)
    Q_hat: int
    R_hat: int
    g: int

    def to_dict(self):
        return {"group": self.group.spec_string, "order": self.group.order,
                "Q_hat": self.Q_hat, "R_hat": self.R_hat, "g": self.g}


def reduce_ext_instance(G, Q, R):
    """One instance per g in the representative set of S_{R,Q}: the group
    N_G(R) cap N_G(gQ) modulo Phi(R gQ), with the images of gQ and R."""
    from .change import ambient_to_sub, quotient_images
    L = G.lattice
    nu = nu_invariant(G, R, Q)
    out = []
    for g in nu.full_set:
        gQ = L.conj(g, Q)
        N = L.meet(L.normalizer[R], L.normalizer[gQ])
        RQ = L.join(R, gQ)
        F = L.frattini[RQ]
        Ng, emb = subgroup_as_group(G, N)
        a2s = ambient_to_sub(G, N)
        Qt, _ = quotient_group(Ng, a2s[F])
        img = quotient_images(Ng, a2s[F])
        out.append(ReductionInstance(Qt, img[a2s[gQ]], img[a2s[R]], int(g)))
    return out


def central_reduction_terms(G, Q, R, Z):
    """(K, (G/Z, Q/Z, R/Z)) for Z central of order p inside Q cap R, where K
    lists N_G(Q)-class representatives of complements of Z in Q."""
    from .change import quotient_images
    L = G.lattice
    if L.orders[Z] != G.p:
        raise GroupError("Z must have order p")
    if not (L.leq(Z, Q) and L.leq(Z, R)):
        raise GroupError("Z must lie in Q cap R")
    if any(G.commutator(int(g), int(z)) != 0 for g in range(G.order) for z in L.elements[Z]):
        raise GroupError("Z must be central")
    K = complements(L, Q, Z, up_to_conjugacy=True)
    Gb, _ = quotient_group(G, Z)
    img = quotient_images(G, Z)
    return K, (Gb, img[Q], img[R])


def min_ext_prediction(G, Q, R):
    """(nu, dim Ext^nu(S_Q, S_R)) with the dimension summed over witnesses g:
    p^{C(a,2)+C(b,2)} / |N_G(R) cap N_G(gQ) : C| where a, b are the ranks of
    R/(R cap gQ) and gQ/(R cap gQ) and C = {x : [x, R gQ] <= R cap gQ}."""
    L = G.lattice
    p = G.p
    nu = nu_invariant(G, R, Q)
    if not nu.finite:
        raise GroupError("nu is infinite: every Ext group vanishes")
    total = 0
    for g in nu.witnesses:
        gQ = L.conj(g, Q)
        I = L.meet(R, gQ)
        a = rank_of(L, R) - rank_of(L, I)
        b = rank_of(L, gQ) - rank_of(L, I)
        N = L.meet(L.normalizer[R], L.normalizer[gQ])
        C = L.meet(z_subgroup(G, I, L.join(R, gQ)), N)
        num = p ** (comb(a, 2) + comb(b, 2))
        idx = L.orders[N] // L.orders[C]
        if num % idx:
            raise ArithmeticError("index does not divide the Steinberg weight")
        total += num // idx
    return DimPrediction("min-ext", {"group": G.spec_string, "Q": Q, "R": R,
                                     "witnesses": list(nu.witnesses)},
                         degree=int(nu.value), value=total)


def ext1_law(G):
    """rank of G / (Phi(G) I(G)) where I(G) is generated by involutions
    (trivial for odd p): the predicted dim Ext^1(S_1, S_1)."""
    L = G.lattice
    W = L.join(L.frattini[L.whole], L.involution_subgroup())
    return L.rank(L.whole) - L.rank(W)
