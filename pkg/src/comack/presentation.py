"""The finitely presented graded algebra generated by classes gamma_x, one for
each nonzero x in an m-dimensional F_2 vector space (all of degree 2), with

    sum_{x not in H} gamma_x = 0            for every hyperplane H,
    [gamma_x + gamma_y, gamma_{x+y}] = 0    for every pair x != y.

Vectors are ints whose bits are coordinates.  Words are tuples of such ints;
a polynomial over F_2 is the set of its words.  The Hilbert function is
computed by brute-force spanning of the two-sided ideal in each degree, and
normal forms by the exchange rewriting towards special ordered monomials.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import fplinalg as fl

MAX_WORDS = 60_000


class PresentationError(ValueError):
    pass


def parity(x):
    return bin(x).count("1") & 1


@dataclass
class PresentationSpec:
    m: int
    p: int = 2
    generators: list = field(default_factory=list)
    linear: list = field(default_factory=list)       # one NCPoly of length-1 words per hyperplane
    commutators: list = field(default_factory=list)  # one NCPoly of length-2 words per pair

    @property
    def relations(self):
        return self.linear + self.commutators

    def index(self):
        return {x: i for i, x in enumerate(self.generators)}


class NCPoly:
    """Homogeneous noncommutative polynomial over F_2 (set of words)."""

    def __init__(self, words=()):
        self.terms = set()
        for w in words:
            self.terms ^= {tuple(w)}

    @property
    def degree(self):
        """Word length (the grading doubles it)."""
        return len(next(iter(self.terms))) if self.terms else 0

    def __add__(self, other):
        out = NCPoly()
        out.terms = self.terms ^ other.terms
        return out

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return " + ".join("g" + ".g".join(map(str, w)) for w in self) or "0"


def build_presentation(m):
    if m < 1:
        raise PresentationError("m must be >= 1")
    gens = list(range(1, 2 ** m))
    # hyperplane H = ker(phi_a); x not in H iff <a, x> = 1
    linear = [NCPoly([(x,) for x in gens if parity(a & x)]) for a in gens]
    comm = []
    for x, y in itertools.combinations(gens, 2):
        z = x ^ y
        comm.append(NCPoly([(x, z), (z, x), (y, z), (z, y)]))
    return PresentationSpec(m=m, generators=gens, linear=linear, commutators=comm)


def _word_index(gens, n):
    """Column index of a word: base-|gens| digits, first letter most significant."""
    pos = {x: i for i, x in enumerate(gens)}
    N = len(gens)

    def idx(w):
        k = 0
        for x in w:
            k = k * N + pos[x]
        return k
    return idx


def ideal_rows(pres, n):
    """Rows spanning the degree-2n part of the relation ideal, as a dense
    F_2 matrix over the basis of length-n words."""
    gens = pres.generators
    N = len(gens)
    if N ** n > MAX_WORDS:
        raise PresentationError(f"{N ** n} words in degree {2 * n} exceeds the guard {MAX_WORDS}")
    idx = _word_index(gens, n)
    rows = []
    for r in pres.relations:
        k = r.degree
        if k > n:
            continue
        for a in range(n - k + 1):
            for u in itertools.product(gens, repeat=a):
                for v in itertools.product(gens, repeat=n - k - a):
                    rows.append([idx(u + w + v) for w in r.terms])
    A = fl.zeros(len(rows), N ** n)
    for i, cols in enumerate(rows):
        A[i, cols] = 1
    return A


def graded_dimension(pres, degree):
    """dim over F_2 of the degree-`degree` component (odd degrees are 0)."""
    if degree % 2:
        return 0
    n = degree // 2
    N = len(pres.generators)
    if n == 0:
        return 1
    A = ideal_rows(pres, n)
    return N ** n - fl.rank(A, 2)


def hilbert_function(pres, max_degree):
    return [graded_dimension(pres, d) for d in range(max_degree + 1)]


def hilbert_json(pres, max_degree):
    degs = list(range(max_degree + 1))
    return json.dumps({"m": pres.m, "p": pres.p, "degrees": degs,
                       "dims": hilbert_function(pres, max_degree)}, sort_keys=True)


class OrderedBasis:
    """Basis b_1 < ... < b_m of F_2^m with the depth function d_B."""

    def __init__(self, vectors, m=None):
        self.vectors = [int(v) for v in vectors]
        self.m = m if m is not None else len(self.vectors)
        if len(self.vectors) != self.m:
            raise PresentationError("basis needs exactly m vectors")
        # coordinates via a table of all 2^m combinations
        self._coords = {}
        for c in range(2 ** self.m):
            x = 0
            for i, b in enumerate(self.vectors):
                if c >> i & 1:
                    x ^= b
            if x in self._coords:
                raise PresentationError("basis vectors are dependent")
            self._coords[x] = c

    @classmethod
    def standard(cls, m):
        return cls([1 << i for i in range(m)], m)

    def depth(self, x):
        c = self._coords[x]
        return c.bit_length()

    def span_before(self, r):
        """Nonzero vectors in the span of b_1..b_{r-1}."""
        return [x for x, c in self._coords.items() if x and c < 1 << (r - 1)]

    def hyperplane_without(self, r):
        """Nonzero vectors of the span of B - {b_r}."""
        return [x for x, c in self._coords.items() if x and not c >> (r - 1) & 1]

    def letters(self):
        """Letters allowed in special monomials, grouped by depth."""
        B = set(self.vectors)
        out = {i: [] for i in range(1, self.m + 1)}
        for x in sorted(self._coords):
            if x and x not in B:
                out[self.depth(x)].append(x)
        return out


def is_special_ordered(word, basis):
    B = set(basis.vectors)
    if any(x in B or x == 0 for x in word):
        return False
    d = [basis.depth(x) for x in word]
    return all(a <= b for a, b in zip(d, d[1:]))


def special_ordered_monomials(basis, n):
    """All special ordered words of length n, in lexicographic order of
    (depth sequence, letters)."""
    letters = basis.letters()
    out = []
    for depths in itertools.combinations_with_replacement(range(1, basis.m + 1), n):
        out.extend(itertools.product(*[letters[d] for d in depths]))
    return out


def special_ordered_count(m, n):
    """Closed count: sum over l_1+..+l_{m-1}=n of prod (2^i - 1)^{l_i}."""
    total = 0
    for ls in itertools.product(range(n + 1), repeat=m - 1):
        if sum(ls) == n:
            c = 1
            for i, l in enumerate(ls, start=1):
                c *= (2 ** i - 1) ** l
            total += c
    return total


def _eliminate_basis_letter(word, basis):
    """Replace the leftmost basis letter b_r by the sum of gamma_{b_r+u},
    u nonzero in the span of B - {b_r}.  None if there is no basis letter."""
    B = {b: r for r, b in enumerate(basis.vectors, start=1)}
    for i, x in enumerate(word):
        if x in B:
            r = B[x]
            return [word[:i] + (x ^ u,) + word[i + 1:] for u in basis.hyperplane_without(r)]
    return None


def normal_form(word, pres, basis=None):
    """Rewrite a word to a sum of special ordered monomials equal to it in
    the algebra."""
    basis = basis or OrderedBasis.standard(pres.m)
    todo = NCPoly([tuple(word)])
    done = set()
    while todo.terms:
        w = max(todo.terms, key=lambda u: (-sum(basis.depth(x) for x in u), u))
        todo.terms.discard(w)
        repl = _eliminate_basis_letter(w, basis)
        if repl is None:
            d = [basis.depth(x) for x in w]
            i = next((j for j in range(len(w) - 1) if d[j] > d[j + 1]), None)
            if i is None:
                done ^= {w}
                continue
            a, b = w[i], w[i + 1]
            t = a ^ b
            # w = swapped + (t a) + (a t) at positions i, i+1
            repl = [w[:i] + (b, a) + w[i + 2:], w[:i] + (t, a) + w[i + 2:], w[:i] + (a, t) + w[i + 2:]]
        for u in repl:
            todo.terms ^= {u}
    out = NCPoly()
    out.terms = done
    return out


def certify(word, nf, pres):
    """True when word - nf lies in the relation ideal (same degree)."""
    n = len(word)
    if n == 0:
        return nf == NCPoly([()]) or not nf
    idx = _word_index(pres.generators, n)
    v = np.zeros(len(pres.generators) ** n, dtype=np.uint8)
    v[idx(tuple(word))] ^= 1
    for w in nf.terms:
        v[idx(w)] ^= 1
    R, piv = fl.rref(ideal_rows(pres, n), 2)
    return fl.in_span(R, piv, v, 2)
