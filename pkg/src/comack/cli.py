"""Command-line interface: `comack <command> ...` or `python -m comack`.

Exit codes: 0 success with every verdict matching, 1 a mismatch or a
computation guard was hit, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import os
import sys
import time

from .groups import GroupError, build_group, group_from_table

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---- helpers --------------------------------------------------------------

def load_group(spec):
    try:
        if os.path.exists(spec):
            return group_from_table(spec)
        return build_group(spec)
    except (GroupError, ValueError) as e:
        raise UsageError(f"bad group {spec!r}: {e}")


def parse_subgroup(G, name):
    """'1' (trivial), 'G' (whole group) or 'c<k>' (class index k as listed
    by the lattice command).  Returns the class representative id."""
    L = G.lattice
    if name == "1":
        return 0
    if name == "G":
        return L.whole
    if name.startswith("c") and name[1:].isdigit():
        k = int(name[1:])
        if k >= len(L.classes):
            raise UsageError(f"class index {k} out of range (0..{len(L.classes) - 1})")
        return L.class_reps[k]
    raise UsageError(f"bad subgroup {name!r}: use 1, G or c<class index>")


def subgroup_label(G, s):
    L = G.lattice
    if s == 0:
        return "1"
    if s == L.whole:
        return "G"
    return f"c{L.class_of[s]}"


def parse_ints(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def emit(args, doc, csv_rows=None, text=None):
    """Write doc in the chosen format to stdout and, if asked, to a file."""
    fmt = args.format
    if fmt == "json":
        out = json.dumps(doc, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in csv_rows or []:
            w.writerow(row)
        out = buf.getvalue()
    else:
        out = (text if text is not None else json.dumps(doc, sort_keys=True, indent=2)) + "\n"
    sys.stdout.write(out)
    if args.output:
        tmp = args.output + ".tmp"
        with open(tmp, "w") as f:
            f.write(out)
        os.replace(tmp, args.output)


def make_cache(args):
    from .homological import ResolutionCache, default_cache_dir
    return ResolutionCache(args.cache_dir or default_cache_dir())


def table_text(header, rows):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    line = lambda r: "  ".join(str(x).rjust(w) for x, w in zip(r, widths))
    return "\n".join([line(header)] + [line(r) for r in rows])


# ---- commands -------------------------------------------------------------

def cmd_lattice(args):
    G = load_group(args.group)
    L = G.lattice
    rows = []
    for k, cl in enumerate(L.classes):
        s = L.class_reps[k]
        rows.append([f"c{k}", s, L.orders[s], len(cl), bool(L.is_normal(s))])
    doc = {"group": G.spec_string, "p": G.p, "order": G.order,
           "classes": [{"name": r[0], "rep": r[1], "order": r[2], "size": r[3], "normal": r[4]}
                       for r in rows]}
    header = ["class", "rep", "order", "size", "normal"]
    emit(args, doc, [header] + rows, table_text(header, rows))
    return EXIT_OK


def _ext_dims(args, G, q, r, n):
    from .homological import ResolutionGuard, simple_resolution
    try:
        res = simple_resolution(G, q, n, cache=make_cache(args), max_dim=args.max_dim)
        return res.ext_dims(r, n), None
    except ResolutionGuard as e:
        res = simple_resolution(G, q, e.degree_reached, cache=make_cache(args), max_dim=args.max_dim) \
            if e.degree_reached >= 0 else None
        dims = res.ext_dims(r, e.degree_reached) if res else []
        return dims, str(e)


def cmd_ext(args):
    from .homological import ExtTable
    G = load_group(args.group)
    q, r = parse_subgroup(G, args.source), parse_subgroup(G, args.target)
    dims, guard = _ext_dims(args, G, q, r, args.max_degree)
    t = ExtTable(G.spec_string, G.p, subgroup_label(G, q), subgroup_label(G, r), dims)
    doc = t.to_dict()
    if guard:
        doc["guard"] = guard
    rows = [[n, d] for n, d in enumerate(dims)]
    emit(args, doc, [["degree", "dim"]] + rows,
         f"Ext^n(S_{t.source}, S_{t.target}) over {t.group}\n" + table_text(["n", "dim"], rows)
         + (f"\n{guard}" if guard else ""))
    return EXIT_MISMATCH if guard else EXIT_OK


def cmd_poincare(args):
    from .formulas import poincare_closed_form
    p = args.p or (2 if args.kind == "elemab2" else 3)
    try:
        pred = poincare_closed_form(args.kind, p, args.m, args.max_degree)
    except ValueError as e:
        raise UsageError(str(e))
    doc = pred.to_dict()
    rows = [[n, d] for n, d in enumerate(pred.dims)]
    emit(args, doc, [["degree", "dim"]] + rows,
         f"{args.kind} series, p={p}, m={args.m}" + (" (conjectural)" if pred.conjectural else "")
         + "\n" + table_text(["n", "dim"], rows))
    return EXIT_OK


def cmd_growth(args):
    from .homological import growth_classify
    if args.series:
        series, src = parse_ints(args.series), "given"
        guard = None
    else:
        if not args.group:
            raise UsageError("growth needs --group or --series")
        G = load_group(args.group)
        q, r = parse_subgroup(G, args.source), parse_subgroup(G, args.target)
        series, guard = _ext_dims(args, G, q, r, args.max_degree)
        src = "resolution"
    try:
        g = growth_classify(series, window=args.window, eps=args.eps)
    except ValueError as e:
        raise UsageError(str(e))
    doc = {"series": series, "source": src, **g.to_dict()}
    if guard:
        doc["guard"] = guard
    emit(args, doc, [["degree", "dim"]] + [[n, d] for n, d in enumerate(series)],
         f"{g.classification} (value {g.value:.4g}, stride {g.stride}); {g.note}")
    return EXIT_OK


def cmd_presentation(args):
    from .presentation import (OrderedBasis, PresentationError, build_presentation, certify,
                               graded_dimension, normal_form, special_ordered_count,
                               special_ordered_monomials)
    try:
        P = build_presentation(args.m)
        B = OrderedBasis(parse_ints(args.basis), args.m) if args.basis else OrderedBasis.standard(args.m)
    except PresentationError as e:
        raise UsageError(str(e))
    degs = list(range(args.max_degree + 1))
    try:
        dims = [graded_dimension(P, d) for d in degs]
    except PresentationError as e:
        raise UsageError(str(e))
    mono = [len(special_ordered_monomials(B, d // 2)) if d % 2 == 0 else 0 for d in degs]
    closed = [special_ordered_count(args.m, d // 2) if d % 2 == 0 else 0 for d in degs]
    verdicts = [{"name": "Hilbert function = special ordered monomials", "lhs": dims, "rhs": mono,
                 "ok": dims == mono},
                {"name": "monomials = closed count", "lhs": mono, "rhs": closed, "ok": mono == closed},
                {"name": "linear relations = 2^m-1", "lhs": len(P.linear), "rhs": 2 ** args.m - 1,
                 "ok": len(P.linear) == 2 ** args.m - 1},
                {"name": "commutator relations = C(2^m-1, 2)", "lhs": len(P.commutators),
                 "rhs": (2 ** args.m - 1) * (2 ** args.m - 2) // 2,
                 "ok": len(P.commutators) == (2 ** args.m - 1) * (2 ** args.m - 2) // 2}]
    doc = {"m": args.m, "p": P.p, "degrees": degs, "dims": dims, "basis": B.vectors,
           "special_ordered": mono, "verdicts": verdicts}
    if args.word:
        w = tuple(parse_ints(args.word))
        if any(x not in P.generators for x in w):
            raise UsageError(f"letters must be nonzero vectors below {2 ** args.m}")
        nf = normal_form(w, P, B)
        ok = certify(w, nf, P)
        doc["normal_form"] = {"word": list(w), "terms": [list(t) for t in nf], "certified": ok}
        verdicts.append({"name": "normal form certified", "lhs": ok, "rhs": True, "ok": ok})
    rows = [[d, x, y] for d, x, y in zip(degs, dims, mono)]
    text = table_text(["degree", "dim", "special"], rows)
    text += "\n" + "\n".join(("PASS " if v["ok"] else "FAIL ") + v["name"] for v in verdicts)
    if args.word:
        text += f"\nnormal form of {list(w)}: {nf!r}"
    emit(args, doc, [["degree", "dim", "special_ordered"]] + rows, text)
    return EXIT_OK if all(v["ok"] for v in verdicts) else EXIT_MISMATCH


def cmd_verify(args):
    from .suites import SUITES
    names = list(SUITES) if args.suite == "all" else [args.suite]
    opts = {"m": args.m, "max_degree": args.max_degree, "instances": args.instances, "seed": args.seed}
    verdicts = []
    timing = {}
    for name in names:
        f = SUITES[name]
        params = inspect.signature(f).parameters
        kw = {k: v for k, v in opts.items() if v is not None and k in params}
        if args.suite != "all":
            extra = [k for k, v in opts.items() if v is not None and k not in params]
            if extra:
                raise UsageError(f"suite {name} does not take --{extra[0].replace('_', '-')}")
        t0 = time.perf_counter()
        for v in f(**kw):
            d = v.to_dict()
            d["suite"] = name
            verdicts.append(d)
        timing[name] = round(1000 * (time.perf_counter() - t0))
    doc = {"command": ["verify"] + sys_argv_tail(args), "verdicts": verdicts}
    if args.timing:
        doc["timing_ms"] = timing
    ok = all(v["ok"] for v in verdicts)
    rows = [[v["suite"], v["name"], json.dumps(v["lhs"]), json.dumps(v["rhs"]), v["ok"]] for v in verdicts]
    lines = []
    for v in verdicts:
        line = f"{'PASS' if v['ok'] else 'FAIL'} [{v['suite']}] {v['name']}"
        if not v["ok"]:
            line += f": {v['lhs_source']} {v['lhs']} != {v['rhs_source']} {v['rhs']}"
        lines.append(line)
    lines.append(f"{sum(v['ok'] for v in verdicts)}/{len(verdicts)} verdicts match")
    emit(args, doc, [["suite", "name", "lhs", "rhs", "ok"]] + rows, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def sys_argv_tail(args):
    return list(getattr(args, "_argv", []))[1:]


def cmd_cache(args):
    cache = make_cache(args)
    if args.action == "list":
        ents = cache.entries()
        doc = {"root": cache.root, "entries": [{"key": k, "degrees": d} for k, d in ents]}
        rows = [[k, ",".join(map(str, d))] for k, d in ents]
        emit(args, doc, [["key", "degrees"]] + rows,
             f"{cache.root}\n" + (table_text(["key", "degrees"], rows) if rows else "(empty)"))
    else:
        n = cache.clear()
        emit(args, {"root": cache.root, "cleared": n}, [["cleared"], [n]], f"cleared {n} entries")
    return EXIT_OK


# ---- parser ---------------------------------------------------------------

def build_parser():
    from .suites import SUITES
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json",
                        help="json (canonical, sorted keys), csv (one row per degree) or text")
    common.add_argument("--output", help="also write the result to this file")
    common.add_argument("--cache-dir", help="resolution cache (default: $COMACK_CACHE or ~/.cache/comack)")
    common.add_argument("--max-dim", type=int, default=400_000,
                        help="guard on the total dimension of a resolution term")

    ap = argparse.ArgumentParser(prog="comack", description="Ext groups of cohomological Mackey functors over F_p.")
    sub = ap.add_subparsers(dest="command", required=True)
    subgroup_help = "subgroup: 1 (trivial), G (whole group) or c<k> (class index from `lattice`)"

    p = sub.add_parser("lattice", parents=[common], help="list subgroup classes")
    p.add_argument("--group", required=True, help="group spec (C4, C2^3, C3xC3, D8, Q8) or table file")

    p = sub.add_parser("ext", parents=[common], help="Ext^n(S_Q, S_R) from a minimal resolution")
    p.add_argument("--group", required=True)
    p.add_argument("--source", default="1", help=subgroup_help)
    p.add_argument("--target", default="1", help=subgroup_help)
    p.add_argument("--max-degree", type=int, default=6)

    p = sub.add_parser("poincare", parents=[common], help="closed-form Poincare series")
    p.add_argument("--kind", choices=["elemab2", "p3"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=10)

    p = sub.add_parser("growth", parents=[common], help="growth class of a computed or given series")
    p.add_argument("--group")
    p.add_argument("--source", default="1", help=subgroup_help)
    p.add_argument("--target", default="1", help=subgroup_help)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--series", help="comma-separated dimensions instead of a group")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--eps", type=float, default=0.1)

    p = sub.add_parser("presentation", parents=[common], help="Hilbert function and normal forms of the presented algebra")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--basis", help="ordered basis as comma-separated ints (default: standard)")
    p.add_argument("--word", help="comma-separated letters to rewrite to normal form")

    p = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--m", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="include timing_ms (breaks byte-identical reruns)")

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the resolution cache")
    p.add_argument("action", choices=["list", "clear"])
    return ap


COMMANDS = {"lattice": cmd_lattice, "ext": cmd_ext, "poincare": cmd_poincare, "growth": cmd_growth,
            "presentation": cmd_presentation, "verify": cmd_verify, "cache": cmd_cache}


def run_command(argv):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    args._argv = list(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        ap.print_usage(sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
