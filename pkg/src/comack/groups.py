"""Finite p-groups as multiplication tables, with their subgroup lattices.

Elements are indices 0..order-1 with the identity at 0.  Subgroups are stored
as Python int bitmasks (bit i set when element i belongs to the subgroup) and
are addressed by their position in the lattice, sorted by (order, bitmask).
"""
from __future__ import annotations

import hashlib
import math
import os
import re
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 128


class GroupError(ValueError):
    pass


def _prime_power(n):
    """Return (p, k) with n = p**k, or None."""
    if n == 1:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def mask_of(elements):
    m = 0
    for e in elements:
        m |= 1 << int(e)
    return m


def elements_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(eq=False)
class Group:
    order: int
    p: int
    mult: np.ndarray
    generator_set: list
    spec_string: str
    inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.int64)
        n = self.order
        self.inv = np.empty(n, dtype=np.int64)
        for g in range(n):
            row = np.nonzero(self.mult[g] == 0)[0]
            self.inv[g] = row[0]
        self._lattice = None
        self._words = None
        self._derived = {}

    def __repr__(self):
        return f"Group({self.spec_string!r}, order={self.order})"

    def mul(self, a, b):
        return int(self.mult[a, b])

    def conj(self, g, h):
        """g h g^-1"""
        return int(self.mult[self.mult[g, h], self.inv[g]])

    def commutator(self, a, b):
        """[a, b] = a b a^-1 b^-1"""
        m, inv = self.mult, self.inv
        return int(m[m[m[a, b], inv[a]], inv[b]])

    def power(self, g, k):
        x = 0
        for _ in range(k):
            x = int(self.mult[x, g])
        return x

    def element_order(self, g):
        k, x = 1, g
        while x != 0:
            x = int(self.mult[x, g])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.mult, self.mult.T))

    @property
    def log_order(self):
        return round(math.log(self.order, self.p)) if self.order > 1 else 0

    def words(self):
        """For each element a word in generator positions, found by BFS.

        word[g] = [i1, ..., ir] means g = x_i1 x_i2 ... x_ir.
        """
        if self._words is None:
            words = {0: []}
            frontier = [0]
            while frontier:
                nxt = []
                for g in frontier:
                    for i, x in enumerate(self.generator_set):
                        y = int(self.mult[g, x])
                        if y not in words:
                            words[y] = words[g] + [i]
                            nxt.append(y)
                frontier = nxt
            self._words = [words[g] for g in range(self.order)]
        return self._words

    @property
    def lattice(self):
        if self._lattice is None:
            self._lattice = SubgroupLattice(self)
        return self._lattice


def closure(G, gens):
    """Element mask of the subgroup generated by gens."""
    seen = {0}
    frontier = [0]
    gens = [int(g) for g in gens if g != 0]
    while frontier:
        nxt = []
        for e in frontier:
            for x in gens:
                y = int(G.mult[e, x])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return mask_of(seen)


def _validate(G):
    n = G.order
    m = G.mult
    if m.shape != (n, n):
        raise GroupError("multiplication table has wrong shape")
    if m.min() < 0 or m.max() >= n:
        raise GroupError("table entry out of range")
    if not (np.array_equal(m[0], np.arange(n)) and np.array_equal(m[:, 0], np.arange(n))):
        raise GroupError("element 0 is not the identity")
    for row in m:
        if len(set(row.tolist())) != n:
            raise GroupError("table is not a Latin square")
    # associativity on all triples: (ab)c == a(bc)
    if not np.array_equal(m[m, :], m[:, m]):
        raise GroupError("table is not associative")
    if closure(G, G.generator_set) != (1 << n) - 1:
        raise GroupError("generator set does not generate the group")


def _greedy_generators(G, mask=None):
    if mask is None:
        mask = (1 << G.order) - 1
    gens, cur = [], 1
    for e in elements_of(mask):
        if not (cur >> e) & 1:
            gens.append(e)
            cur = closure(G, gens)
    return gens


def make_group(mult, spec_string, generators=None, p=None):
    """Validated group from a table.  p must be given for the trivial group
    (it is inherited from the ambient group for subgroups and quotients)."""
    mult = np.asarray(mult, dtype=np.int64)
    n = mult.shape[0]
    if n > MAX_ORDER:
        raise GroupError(f"order {n} exceeds cap {MAX_ORDER}")
    if n == 1:
        if p is None:
            raise GroupError("the trivial group needs an explicit prime")
    else:
        pk = _prime_power(n)
        if pk is None:
            raise GroupError(f"order {n} is not a prime power")
        p = pk[0]
    G = Group(order=n, p=p, mult=mult, generator_set=[], spec_string=spec_string)
    G.generator_set = list(generators) if generators is not None else _greedy_generators(G)
    _validate(G)
    return G


# ---- named constructions ------------------------------------------------

def _cyclic(n):
    a = np.arange(n)
    return (a[:, None] + a[None, :]) % n, [1] if n > 1 else []


def _dihedral8():
    # element j*4 + i is r^i s^j
    def mul(x, y):
        a, b = x % 4, x // 4
        c, d = y % 4, y // 4
        e = (a + (c if b == 0 else -c)) % 4
        return ((b + d) % 2) * 4 + e
    t = np.array([[mul(x, y) for y in range(8)] for x in range(8)])
    return t, [1, 4]


def _quaternion8():
    # 0..3 = 1, i, j, k and 4..7 their negatives
    base = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(x, y):
        s = (-1) ** (x // 4 + y // 4)
        sign, u = base[(x % 4, y % 4)]
        return u + (0 if s * sign == 1 else 4)
    t = np.array([[mul(x, y) for y in range(8)] for x in range(8)])
    return t, [1, 2]


def _direct_product(A, gensA, B, gensB):
    na, nb = A.shape[0], B.shape[0]
    # element a*nb + b is (a, b)
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    t = A[ia[:, None], ia[None, :]] * nb + B[ib[:, None], ib[None, :]]
    gens = [g * nb for g in gensA] + [g for g in gensB]
    return t, gens


_TERM = re.compile(r"^(?:C(\d+)(?:\^(\d+))?|D8|Q8)$")


def _parse_term(term):
    m = _TERM.match(term)
    if not m:
        raise GroupError(f"cannot parse group term {term!r}")
    if term == "D8":
        return [_dihedral8()]
    if term == "Q8":
        return [_quaternion8()]
    n, k = int(m.group(1)), int(m.group(2) or 1)
    if n < 1 or k < 1:
        raise GroupError(f"bad cyclic term {term!r}")
    return [_cyclic(n)] * k


def build_group(spec):
    """Build a group from a spec such as "C2^3", "C4xC2", "D8", "Q8".

    A path to an existing file is read as a multiplication-table file.
    """
    spec = spec.strip()
    if spec.startswith("table:"):
        return group_from_table(spec[len("table:"):])
    if os.path.isfile(spec):
        return group_from_table(spec)
    terms = [t.strip() for t in spec.split("x")]
    if any(not t for t in terms):
        raise GroupError(f"cannot parse group spec {spec!r}")
    factors = []
    for t in terms:
        factors.extend(_parse_term(t))
    orders = [f[0].shape[0] for f in factors]
    total = math.prod(orders)
    if total > MAX_ORDER:
        raise GroupError(f"order {total} exceeds cap {MAX_ORDER}")
    primes = {_prime_power(n)[0] for n in orders if n > 1 and _prime_power(n)}
    if any(n > 1 and _prime_power(n) is None for n in orders) or len(primes) > 1:
        raise GroupError(f"{spec!r} is not a p-group")
    table, gens = factors[0]
    for t2, g2 in factors[1:]:
        table, gens = _direct_product(table, gens, t2, g2)
    return make_group(table, spec, generators=gens)


def group_from_table(path):
    with open(path) as fh:
        text = fh.read()
    nums = [int(x) for x in text.split()]
    if not nums:
        raise GroupError("empty table file")
    n = nums[0]
    if len(nums) != 1 + n * n:
        raise GroupError(f"table file needs {n * n} entries, found {len(nums) - 1}")
    table = np.array(nums[1:]).reshape(n, n)
    digest = hashlib.sha1(text.encode()).hexdigest()[:12]
    return make_group(table, f"table:{digest}")


# ---- subgroup lattice ---------------------------------------------------

def _mask_from_bool(arr):
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


class SubgroupLattice:
    """All subgroups of G with inclusion, covers, conjugacy classes,
    normalizers, centralizers and Frattini subgroups."""

    def __init__(self, G):
        self.group = G
        n, p = G.order, G.p
        masks = {1}
        frontier = [1]
        # each subgroup is reached from its maximal subgroups by adding one
        # element that normalizes it and has p-th power inside it
        while frontier:
            nxt = []
            for H in frontier:
                hel = elements_of(H)
                done = H
                for g in range(n):
                    if (done >> g) & 1:
                        continue
                    if not (H >> G.power(g, p)) & 1:
                        continue
                    if any(not (H >> G.conj(g, h)) & 1 for h in hel):
                        continue
                    K = closure(G, hel + [g])
                    done |= K
                    if K not in masks:
                        masks.add(K)
                        nxt.append(K)
            frontier = nxt
        self.subgroups = sorted(masks, key=lambda m: (bin(m).count("1"), m))
        self.index_of = {m: i for i, m in enumerate(self.subgroups)}
        self.elements = [elements_of(m) for m in self.subgroups]
        self.orders = [len(e) for e in self.elements]
        S = len(self.subgroups)
        self.member = np.zeros((S, n), dtype=bool)
        for i, el in enumerate(self.elements):
            self.member[i, el] = True
        # inclusion[a, b] = a <= b
        mem = self.member.astype(np.int32)
        self.inclusion = (mem @ (1 - mem).T) == 0
        self.covers = [(a, b) for a in range(S) for b in range(S)
                       if self.inclusion[a, b] and self.orders[b] == p * self.orders[a]]
        self.covers_above = [[] for _ in range(S)]
        self.covers_below = [[] for _ in range(S)]
        for a, b in self.covers:
            self.covers_above[a].append(b)
            self.covers_below[b].append(a)
        # conj_table[g, s] = id of g s g^-1
        conj_el = G.mult[G.mult, G.inv[:, None]]  # conj_el[g, h] = g h g^-1
        self.conj_table = np.zeros((n, S), dtype=np.int64)
        for s, el in enumerate(self.elements):
            img = np.zeros((n, n), dtype=bool)
            img[np.arange(n)[:, None], conj_el[:, el]] = True
            for g in range(n):
                self.conj_table[g, s] = self.index_of[_mask_from_bool(img[g])]
        self.class_of = [-1] * S
        self.classes = []
        for s in range(S):
            if self.class_of[s] < 0:
                members = sorted(set(self.conj_table[:, s].tolist()))
                for t in members:
                    self.class_of[t] = len(self.classes)
                self.classes.append(members)
        self.class_reps = [c[0] for c in self.classes]
        self.normalizer = [self.subgroup_from_elements(np.nonzero(self.conj_table[:, s] == s)[0])
                           for s in range(S)]
        comm = G.mult == G.mult.T
        self.centralizer = [self.subgroup_from_elements(np.nonzero(comm[:, el].all(axis=1))[0])
                            for el in self.elements]
        self.frattini = []
        for el in self.elements:
            gens = {G.power(h, p) for h in el}
            gens |= {G.commutator(a, b) for a in el for b in el}
            self.frattini.append(self.generated(gens))
        self._gens = {}

    # -- basic queries
    @property
    def trivial(self):
        return 0

    @property
    def whole(self):
        return len(self.subgroups) - 1

    def __len__(self):
        return len(self.subgroups)

    def leq(self, a, b):
        return bool(self.inclusion[a, b])

    def index(self, a, b):
        """|b : a| for a <= b"""
        return self.orders[b] // self.orders[a]

    def rank(self, s):
        """log_p of the order."""
        o = self.orders[s]
        return round(math.log(o, self.group.p)) if o > 1 else 0

    def generated(self, elements):
        return self.index_of[closure(self.group, list(elements))]

    def subgroup_from_elements(self, elements):
        m = mask_of(elements)
        if m not in self.index_of:
            raise GroupError("element set is not a subgroup")
        return self.index_of[m]

    def meet(self, a, b):
        return self.index_of[self.subgroups[a] & self.subgroups[b]]

    def join(self, *ids):
        el = []
        for s in ids:
            el.extend(self.generators(s))
        return self.generated(el)

    def commutator_subgroup(self, a, b):
        G = self.group
        return self.generated({G.commutator(x, y) for x in self.elements[a] for y in self.elements[b]})

    def conj(self, g, s):
        return int(self.conj_table[g, s])

    def is_normal(self, s, ambient=None):
        if ambient is None:
            return bool((self.conj_table[:, s] == s).all())
        return all(self.conj_table[g, s] == s for g in self.elements[ambient])

    def rep(self, s):
        return self.class_reps[self.class_of[s]]

    def generators(self, s):
        """A minimal generating set of subgroup s (greedy by element index)."""
        if s not in self._gens:
            self._gens[s] = _greedy_generators(self.group, self.subgroups[s])
        return self._gens[s]

    def subgroups_of(self, s):
        return [t for t in range(len(self)) if self.inclusion[t, s]]

    def overgroups(self, s):
        return [t for t in range(len(self)) if self.inclusion[s, t]]

    def is_elementary_abelian(self, s):
        G = self.group
        el = self.elements[s]
        return self.frattini[s] == 0 and all(G.mult[a, b] == G.mult[b, a] for a in el for b in el)

    def involution_subgroup(self):
        """I(G): generated by elements of order 2 (trivial for odd p)."""
        G = self.group
        if G.p != 2:
            return 0
        return self.generated([g for g in range(G.order) if g and G.mult[g, g] == 0])

    def left_cosets(self, s):
        """Left cosets gS ordered by their smallest element.

        Returns (cosets, coset_of) where coset_of[g] is the index of gS.
        """
        G = self.group
        el = self.elements[s]
        coset_of = np.full(G.order, -1, dtype=np.int64)
        cosets = []
        for g in range(G.order):
            if coset_of[g] < 0:
                c = sorted(G.mult[g, el].tolist())
                coset_of[c] = len(cosets)
                cosets.append(c)
        return cosets, coset_of

    def label(self, s):
        if s == 0:
            return "1"
        if s == self.whole:
            return "G"
        return f"H{s}"


def subgroup_lattice(G):
    return G.lattice


def double_cosets(G, H, K):
    """One representative (smallest element index) per H\\G/K double coset."""
    L = G.lattice
    he, ke = L.elements[H], L.elements[K]
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for g in range(G.order):
        if not seen[g]:
            reps.append(g)
            seen[G.mult[G.mult[he, g][:, None], ke].ravel()] = True
    return reps


def double_coset(G, H, K, g):
    L = G.lattice
    he, ke = L.elements[H], L.elements[K]
    return sorted(set(G.mult[G.mult[he, g][:, None], ke].ravel().tolist()))


def complements(L, H, N, up_to_conjugacy=False):
    """All X with N X = H and N cap X = 1 (N normal in G, N <= H).

    With up_to_conjugacy, one representative (smallest id) per N_G(H)-orbit.
    """
    if not L.is_normal(N):
        raise GroupError("N is not normal in G")
    if not L.leq(N, H):
        raise GroupError("N is not contained in H")
    target = L.orders[H] // L.orders[N]
    out = [X for X in range(len(L)) if L.orders[X] == target and L.leq(X, H)
           and L.meet(X, N) == 0]
    if up_to_conjugacy:
        NH = L.elements[L.normalizer[H]]
        reps, seen = [], set()
        for X in out:
            if X not in seen:
                reps.append(X)
                seen.update(L.conj(g, X) for g in NH)
        out = reps
    return out


def subgroup_as_group(G, s):
    """Subgroup s as a group in its own right.

    Returns (group, embedding) where embedding[i] is the element of G that
    element i of the new group corresponds to.
    """
    key = ("sub", s)
    if key in G._derived:
        return G._derived[key]
    L = G.lattice
    emb = np.array(L.elements[s], dtype=np.int64)
    pos = {int(e): i for i, e in enumerate(emb)}
    table = np.vectorize(pos.get)(G.mult[emb[:, None], emb[None, :]]) if len(emb) > 1 else np.zeros((1, 1), int)
    gens = [pos[g] for g in L.generators(s)]
    H = make_group(table, f"{G.spec_string}[{L.subgroups[s]:x}]", generators=gens, p=G.p)
    G._derived[key] = (H, emb)
    return H, emb


def quotient_group(G, N):
    """G/N with cosets ordered by smallest element; returns (group, projection)."""
    key = ("quo", N)
    if key in G._derived:
        return G._derived[key]
    L = G.lattice
    if not L.is_normal(N):
        raise GroupError("N is not normal in G")
    cosets, coset_of = L.left_cosets(N)
    reps = [c[0] for c in cosets]
    k = len(cosets)
    table = np.array([[coset_of[G.mult[a, b]] for b in reps] for a in reps], dtype=np.int64)
    gens = sorted({int(coset_of[g]) for g in G.generator_set} - {0})
    Q = make_group(table, f"{G.spec_string}/{L.subgroups[N]:x}", generators=gens if k > 1 else [], p=G.p)
    G._derived[key] = (Q, coset_of.copy())
    return G._derived[key]


def group_isomorphism_class(G):
    """Coarse invariant (order, is_abelian, sorted element orders)."""
    return (G.order, G.is_abelian(), tuple(sorted(G.element_order(g) for g in range(G.order))))


def is_cyclic(G):
    return any(G.element_order(g) == G.order for g in range(G.order))


def elementary_abelian_rank(G):
    """m if G is elementary abelian of order p^m, else None."""
    if G.order == 1:
        return 0
    if not G.is_abelian() or any(G.element_order(g) > G.p for g in range(G.order)):
        return None
    return G.log_order


# ---- nu invariant -------------------------------------------------------

INF = float("inf")


@dataclass
class NuResult:
    value: float  # int, or INF
    witnesses: list
    full_set: list

    @property
    def finite(self):
        return self.value != INF


def in_S(G, R, Q, g):
    """Whether Phi(R) gPhi(Q) [R, gQ] <= R cap gQ."""
    L = G.lattice
    gQ = L.conj(g, Q)
    F = L.join(L.frattini[R], L.frattini[gQ], L.commutator_subgroup(R, gQ))
    return L.leq(F, L.meet(R, gQ))


def nu_invariant(G, R, Q):
    L = G.lattice
    p = G.p
    reps = double_cosets(G, L.normalizer[R], L.normalizer[Q])
    full, best, wit = [], None, []
    for g in reps:
        if not in_S(G, R, Q, g):
            continue
        full.append(g)
        gQ = L.conj(g, Q)
        I = L.orders[L.meet(R, gQ)]
        idx = L.orders[R] * L.orders[gQ] // (I * I)
        e = round(math.log(idx, p)) if idx > 1 else 0
        if best is None or e < best:
            best, wit = e, [g]
        elif e == best:
            wit.append(g)
    return NuResult(INF if best is None else best, wit, full)
