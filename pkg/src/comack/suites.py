"""Named verification suites: each compares a resolution-computed quantity
with an independent prediction (closed form, recursion, oracle) and returns
a list of Verdicts.  The CLI `verify` command and the acceptance tests both
run these."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import build_group, is_cyclic, nu_invariant, quotient_group, subgroup_as_group
from .homological import (ext_simple, gamma_class, growth_classify, simple_resolution,
                          yoneda_product)


@dataclass
class Verdict:
    name: str
    lhs: object
    rhs: object
    ok: bool
    lhs_source: str = "resolution"
    rhs_source: str = "formula"

    def to_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "ok": bool(self.ok),
                "lhs_source": self.lhs_source, "rhs_source": self.rhs_source}


def _v(name, lhs, rhs, lsrc="resolution", rsrc="formula"):
    return Verdict(name, lhs, rhs, lhs == rhs, lsrc, rsrc)


def _whole(G):
    return G.lattice.whole


# ---- criteria -------------------------------------------------------------

def suite_cyclic(max_degree=10):
    out = []
    for spec in ["C3", "C4", "C8", "C9"]:
        d = ext_simple(build_group(spec), 0, 0, max_degree)
        out.append(_v(f"{spec}: Ext^n(S_1,S_1), 1<=n<={max_degree}", d[1:], [1] * max_degree,
                      rsrc="cyclic |G|>=3: all 1"))
    d = ext_simple(build_group("C2"), 0, 0, max_degree)
    out.append(_v(f"C2: Ext^n(S_1,S_1), 1<=n<={max_degree}", d[1:], [0] * max_degree,
                  rsrc="cyclic |G|=2: all 0"))
    return out


def suite_elemab2(m=2, max_degree=12):
    from .formulas import poincare_closed_form
    G = build_group("C2" if m == 1 else f"C2^{m}")
    d = ext_simple(G, 0, 0, max_degree)
    pred = poincare_closed_form("elemab2", 2, m, max_degree).dims
    return [_v(f"C2^{m}: Ext^n(S_1,S_1), n<={max_degree}", d, pred, rsrc="elemab2 series"),
            _v(f"C2^{m}: odd degrees vanish", [x for x in d[1::2]], [0] * len(d[1::2]),
               rsrc="odd vanishing")]


def suite_ext1(groups=("C2", "C4", "C9", "C2^3", "C3^2", "D8"), expected=(0, 1, 1, 0, 2, 0)):
    from .formulas import ext1_law
    out = []
    for spec, e in zip(groups, expected):
        G = build_group(spec)
        d = ext_simple(G, 0, 0, 1)[1]
        out.append(_v(f"{spec}: dim Ext^1(S_1,S_1)", d, ext1_law(G), rsrc="rank of G/Phi(G)I(G)"))
        out.append(_v(f"{spec}: law value", ext1_law(G), e, "formula", "expected"))
    return out


def suite_p3(m=2, max_degree=5):
    from .formulas import poincare_closed_form
    G = build_group(f"C3^{m}")
    d = ext_simple(G, 0, 0, max_degree)
    pred = poincare_closed_form("p3", 3, m, max_degree)
    return [_v(f"C3^{m}: Ext^n(S_1,S_1), n<={max_degree}", d, pred.dims, rsrc="p3 series")]


def suite_steinberg():
    from .formulas import flag_count_oracle, min_ext_prediction, steinberg_dim
    out = []
    for spec, deg, dim in [("C2^3", 3, 8), ("C3^2", 2, 3)]:
        G = build_group(spec)
        W = _whole(G)
        d = ext_simple(G, W, 0, deg)
        expect = [0] * deg + [dim]
        out.append(_v(f"{spec}: Ext^n(S_G,S_1), n<={deg}", d, expect, rsrc="expected"))
        sd = steinberg_dim(G, W, 0)
        out.append(_v(f"{spec}: Steinberg degree/dim", [deg, d[deg]], [sd.degree, sd.value],
                      rsrc="steinberg formula"))
        out.append(_v(f"{spec}: flag count", flag_count_oracle(G, W, 0), sd.value,
                      "flag enumeration", "steinberg formula"))
        mp = min_ext_prediction(G, W, 0)
        nu = nu_invariant(G, 0, W)
        out.append(_v(f"{spec}: vanishing below nu", d[:int(nu.value)], [0] * int(nu.value),
                      rsrc="Ext zero below nu"))
        out.append(_v(f"{spec}: min-ext prediction", [deg, d[deg]], [mp.degree, mp.value],
                      rsrc="min-ext formula"))
    return out


def admissible_pairs(G):
    L = G.lattice
    cand = [s for s in L.class_reps if L.is_elementary_abelian(s) and L.is_normal(s)]
    return [(q, r) for q in cand for r in cand if L.commutator_subgroup(q, r) == 0]


def suite_factor_ext(groups=("C2^2", "C4"), max_degree=6):
    from .formulas import factor_ext_recursion
    out = []
    for spec in groups:
        G = build_group(spec)
        for q, r in admissible_pairs(G):
            pred = factor_ext_recursion(G, q, r, max_degree)
            d = ext_simple(G, q, r, max_degree)
            out.append(_v(f"{spec}: Ext^n(S_{q},S_{r}), n<={max_degree}", d, pred.dims,
                          rsrc="factor-ext recursion"))
    G = build_group("C2^2")
    W = _whole(G)
    out.append(_v("C2^2: dim Ext^2(S_G,S_G)", ext_simple(G, W, W, 2)[2],
                  factor_ext_recursion(G, W, W, 2).dims[2], rsrc="factor-ext recursion"))
    out.append(_v("C2^2: dim Ext^2(S_G,S_G) = 3", ext_simple(G, W, W, 2)[2], 3, rsrc="derived"))
    return out


def central_identity(G, Q, R, Z, max_degree=5):
    """lhs: Ext^n_G(S_Q,S_R); rhs: sum_X Ext^{n-1}_G(S_X,S_R) + Ext^n_{G/Z}."""
    from .formulas import central_reduction_terms
    K, (Gb, Qb, Rb) = central_reduction_terms(G, Q, R, Z)
    lhs = ext_simple(G, Q, R, max_degree)
    quo = ext_simple(Gb, Qb, Rb, max_degree)
    parts = [ext_simple(G, X, R, max_degree) for X in K]
    rhs = [quo[n] + sum(x[n - 1] for x in parts if n) for n in range(max_degree + 1)]
    return lhs, rhs


def suite_central(max_degree=5):
    out = []
    G = build_group("C4")
    lhs, rhs = central_identity(G, 1, 1, 1, max_degree)
    out.append(_v("C4: Q=R=Z", lhs, rhs, rsrc="central reduction"))
    G = build_group("C2^2")
    L = G.lattice
    for Z in [s for s in range(len(L)) if L.orders[s] == 2]:
        lhs, rhs = central_identity(G, L.whole, L.whole, Z, max_degree)
        out.append(_v(f"C2^2: Q=R=G, Z={Z}", lhs, rhs, rsrc="central reduction"))
    G = build_group("D8")
    c = center_id(G)
    lhs, rhs = central_identity(G, c, c, c, max_degree)
    out.append(_v("D8: Q=R=Z=center", lhs, rhs, rsrc="central reduction"))
    return out


def center_id(G):
    L = G.lattice
    return next(s for s in range(len(L)) if L.orders[s] == G.p and L.is_normal(s)
                and all(G.commutator(g, int(z)) == 0 for g in range(G.order) for z in L.elements[s]))


def d8_c4_and_reflections(G):
    L = G.lattice
    c4 = next(s for s in range(len(L)) if L.orders[s] == 4 and is_cyclic(subgroup_as_group(G, s)[0]))
    refl = [s for s in range(len(L)) if L.orders[s] == 2 and not L.is_normal(s)]
    return c4, refl


def suite_nu(max_degree=6):
    from .formulas import reduce_ext_instance
    G = build_group("D8")
    c4, refl = d8_c4_and_reflections(G)
    out = []
    for R in sorted({G.lattice.rep(r) for r in refl}):
        nu = nu_invariant(G, R, c4)
        out.append(_v(f"D8: nu(R={R}, Q=C4)", str(nu.value), "inf", "nu invariant", "expected"))
        out.append(_v(f"D8: Ext^n(S_C4,S_{R}), n<={max_degree}", ext_simple(G, c4, R, max_degree),
                      [0] * (max_degree + 1), rsrc="nu infinite"))
        out.append(_v(f"D8: reduction instances (R={R})", len(reduce_ext_instance(G, c4, R)), 0,
                      "reduce_ext_instance", "expected"))
    return out


def suite_presentation():
    from .presentation import (OrderedBasis, build_presentation, graded_dimension,
                               special_ordered_count, special_ordered_monomials)
    out = []
    for m, top in [(2, 8), (3, 4)]:
        P = build_presentation(m)
        B = OrderedBasis.standard(m)
        hil = [graded_dimension(P, d) for d in range(top + 1)]
        som = [len(special_ordered_monomials(B, d // 2)) if d % 2 == 0 else 0 for d in range(top + 1)]
        cnt = [special_ordered_count(m, d // 2) if d % 2 == 0 else 0 for d in range(top + 1)]
        ext = ext_simple(build_group(f"C2^{m}"), 0, 0, top)
        out.append(_v(f"m={m}: Hilbert function vs special ordered monomials", hil, som,
                      "ideal span", "monomial enumeration"))
        out.append(_v(f"m={m}: monomial enumeration vs closed count", som, cnt,
                      "monomial enumeration", "closed count"))
        out.append(_v(f"m={m}: Hilbert function vs Ext", hil, ext, "ideal span", "resolution"))
    for m in range(1, 5):
        out.append(_v(f"m={m}: degree-2 dimension", graded_dimension(build_presentation(m), 2),
                      2 ** m - m - 1, "ideal span", "2^m-m-1"))
    return out


def suite_relations():
    G = build_group("C2^2")
    L = G.lattice
    res = simple_resolution(G, 0, 5)
    inv = [s for s in range(len(L)) if L.orders[s] == 2]
    gam = {X: gamma_class(G, X, res) for X in inv}
    out = []
    for X in inv:
        out.append(_v(f"gamma_{X} nonzero", gam[X].is_zero(), False, "Yoneda", "expected"))
    # hyperplanes of C2^2 are the subgroups of order 2
    for H in inv:
        s = None
        for X in inv:
            if not L.inclusion[X, H]:
                s = gam[X] if s is None else s + gam[X]
        out.append(_v(f"sum of gamma_X, X not in H={H}, is zero", s.is_zero(), True, "Yoneda", "expected"))
    total = None
    for X in inv:
        total = gam[X] if total is None else total + gam[X]
    for Y in inv:
        c = yoneda_product(total, gam[Y]) - yoneda_product(gam[Y], total)
        out.append(_v(f"[sum gamma_X, gamma_{Y}] is zero", c.is_zero(), True, "Yoneda", "expected"))
    return out


def suite_cyclic_resolutions(max_degree=10):
    from .cyclic import (check_kernel, is_power, periodic_maps, s1_periodic_resolution,
                         supersurjective_check)
    out = []
    for p, m in [(2, 3), (3, 2)]:
        for d in range(2, p ** m):
            if is_power(d, p):
                continue
            pm = periodic_maps(p, m, d)
            out.append(_v(f"C{p ** m}: e_{d} supersurjective", supersurjective_check(pm.e).ok, True,
                          "fixed points", "expected"))
            out.append(_v(f"C{p ** m}: ker e_{d} is E_{p ** pm.h + p ** (pm.h + 1) - d}",
                          check_kernel(pm), True, "Jordan type", "expected"))
    for p, m in [(3, 2), (2, 2)]:
        R = s1_periodic_resolution(p, m, max_degree)
        mr = simple_resolution(R.group, 0, max_degree)
        out.append(_v(f"C{p ** m}: explicit vs minimal multiplicities",
                      [sorted(R.multiplicities(n).items()) for n in range(max_degree + 1)],
                      [sorted(mr.terms()[n].items()) for n in range(max_degree + 1)],
                      "explicit resolution", "minimal resolution"))
        out.append(_v(f"C{p ** m}: explicit Ext", R.ext_dims(), [1] * (max_degree + 1),
                      "explicit resolution", "expected"))
    return out


AXIOM_GROUPS = ("C2", "C3", "C4", "C8", "C9", "C2^2", "C2^3", "C3^2", "D8")


def produced_functors():
    """Functors built while running the other suites: simples, two-layer
    functors and their duals, cyclic FP functors, quotient simples."""
    from .cyclic import periodic_maps
    from .mackey import dual_functor, fixed_point_functor, simple_functor, two_layer_sequence
    out = []
    for spec in AXIOM_GROUPS:
        G = build_group(spec)
        L = G.lattice
        out += [(f"{spec}: S_{q}", simple_functor(G, q)) for q in L.class_reps]
        for q in L.class_reps:
            for r in L.covers_above[q]:
                if L.is_normal(q, ambient=r):
                    E = two_layer_sequence(G, q, r)[0].target
                    out.append((f"{spec}: <{r} over {q}>", E))
                    out.append((f"{spec}: <{r} over {q}>*", dual_functor(E)))
    for p, m in [(2, 3), (3, 2)]:
        pm = periodic_maps(p, m, p ** m - 1)
        out.append((f"C{p ** m}: FP(E_{p ** (m - 1)}+E_{p ** m})", fixed_point_functor(pm.pair)))
        out.append((f"C{p ** m}: FP(E_{p ** m - 1})", fixed_point_functor(pm.E[p ** m - 1])))
    for spec, N in [("C4", 1), ("C2^2", 1), ("D8", None)]:
        G = build_group(spec)
        N = center_id(G) if N is None else N
        Q, _ = quotient_group(G, N)
        out += [(f"{spec}/{N}: S_{q}", simple_functor(Q, q)) for q in Q.lattice.class_reps]
    return out


def adjunction_checks(G, rng, instances=50):
    """Random instances of the adjunction and duality dimension identities.
    Returns (name, lhs, rhs) triples."""
    from .change import induce, iota, jota, restrict, rho
    from .mackey import dual_functor, hom_dim, random_functor, verify_axioms
    L = G.lattice
    out = []
    proper = [s for s in L.class_reps if s != L.whole]
    normal = [s for s in range(len(L)) if s and L.is_normal(s)]
    for i in range(instances):
        M, N = random_functor(G, rng), random_functor(G, rng)
        out.append((f"axioms M#{i}", bool(verify_axioms(M)), True))
        out.append((f"dual #{i}", hom_dim(M, N), hom_dim(dual_functor(N), dual_functor(M))))
        if proper:
            s = int(rng.choice(proper))
            H, _ = subgroup_as_group(G, s)
            A = random_functor(H, rng)
            IA, RN = induce(A, G, s), restrict(N, s)
            out.append((f"ind-res #{i} (H={s})", hom_dim(IA, N), hom_dim(A, RN)))
            out.append((f"res-ind #{i} (H={s})", hom_dim(RN, A), hom_dim(N, IA)))
            out.append((f"axioms ind #{i}", bool(verify_axioms(IA)), True))
        if normal:
            n0 = int(rng.choice(normal))
            Q, _ = quotient_group(G, n0)
            B = random_functor(Q, rng)
            iB, jB, rN = iota(B, G, n0), jota(B, G, n0), rho(N, n0)
            out.append((f"iota-rho #{i} (N={n0})", hom_dim(iB, N), hom_dim(B, rN)))
            out.append((f"rho-jota #{i} (N={n0})", hom_dim(rN, B), hom_dim(N, jB)))
            out.append((f"axioms iota/jota #{i}", bool(verify_axioms(iB)) and bool(verify_axioms(jB)), True))
    return out


def suite_axioms(instances=50, seed=0):
    from .mackey import verify_axioms
    out = []
    bad = [name for name, F in produced_functors() if not verify_axioms(F)]
    out.append(_v("produced functors failing the axioms", bad, [], "verify_axioms", "expected"))
    rng = np.random.default_rng(seed)
    for spec in AXIOM_GROUPS:
        checks = adjunction_checks(build_group(spec), rng, instances)
        fails = [(n, a, b) for n, a, b in checks if a != b]
        out.append(_v(f"{spec}: {len(checks)} adjunction/duality/axiom checks, failures",
                      fails, [], "random instances", "expected"))
    return out


def suite_growth():
    out = []
    for spec in ["C3", "C4", "C8", "C9"]:
        g = growth_classify(ext_simple(build_group(spec), 0, 0, 10))
        out.append(_v(f"{spec}: growth class", g.classification, "bounded", "growth_classify", "expected"))
    g = growth_classify(ext_simple(build_group("C2^3"), 0, 0, 8))
    out.append(_v("C2^3: growth class", g.classification, "exponential", "growth_classify", "expected"))
    out.append(_v("C2^3: rounded ratio", round(g.value), 3, "growth_classify", "2^(m-1)-1"))
    g = growth_classify(ext_simple(build_group("C3^2"), 0, 0, 7))
    out.append(_v("C3^2: growth class", g.classification, "exponential", "growth_classify", "expected"))
    out.append(_v("C3^2: rounded ratio", round(g.value), 2, "growth_classify", "expected"))
    return out


SUITES = {
    "cyclic": suite_cyclic,
    "elemab2": suite_elemab2,
    "ext1": suite_ext1,
    "p3": suite_p3,
    "steinberg": suite_steinberg,
    "factor-ext": suite_factor_ext,
    "central": suite_central,
    "nu": suite_nu,
    "presentation": suite_presentation,
    "relations": suite_relations,
    "cyclic-resolutions": suite_cyclic_resolutions,
    "axioms": suite_axioms,
    "growth": suite_growth,
}


def run_suite(name, **kw):
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**kw)
