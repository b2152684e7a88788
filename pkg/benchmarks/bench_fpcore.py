"""Compiled vs numpy row-reduction kernels.

    python benchmarks/bench_fpcore.py [--repeat 3] [--resolution]

Times rref on random matrices over F_2 and F_3 under both backends, checks
the outputs agree, and optionally times a full resolution (S_1 over C2^3 to
degree 6) end to end.
"""
import argparse
import time

import numpy as np

from comack import fplinalg as fl


def timeit(f, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = f()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_rref(shapes, p, repeat, rng):
    rows = []
    for r, c in shapes:
        a = rng.integers(0, p, size=(r, c)).astype(np.uint8)
        res = {}
        for name in ("python", "compiled"):
            fl.use_backend(name)
            res[name] = timeit(lambda: fl.rref(a, p), repeat)
        (tp, (Rp, pp)), (tc, (Rc, pc)) = res["python"], res["compiled"]
        same = np.array_equal(Rp, Rc) and list(pp) == list(pc)
        rows.append((p, r, c, tp, tc, tp / tc, same))
    return rows


def bench_resolution(repeat):
    from comack.groups import build_group
    from comack.homological import minimal_resolution
    from comack.mackey import simple_functor
    out = {}
    for name in ("python", "compiled"):
        fl.use_backend(name)

        def run():
            G = build_group("C2^3")
            return minimal_resolution(simple_functor(G, 0), 6).ext_dims(0, 6)
        out[name] = timeit(run, repeat)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--resolution", action="store_true")
    args = ap.parse_args()
    try:
        fl.use_backend("compiled")
    except ImportError:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
        return
    rng = np.random.default_rng(0)
    shapes = [(100, 100), (400, 400), (1000, 1000), (2000, 1500)]
    print(f"{'p':>2} {'rows':>5} {'cols':>5} {'python s':>10} {'compiled s':>11} {'speedup':>8}  same")
    for p in (2, 3):
        for row in bench_rref(shapes, p, args.repeat, rng):
            print("{:>2} {:>5} {:>5} {:>10.4f} {:>11.4f} {:>8.1f}  {}".format(*row))
    if args.resolution:
        res = bench_resolution(1)
        tp, dp = res["python"]
        tc, dc = res["compiled"]
        print(f"resolution S_1 over C2^3 to degree 6: python {tp:.2f}s, compiled {tc:.2f}s, "
              f"speedup {tp / tc:.1f}, dims agree {dp == dc}")


if __name__ == "__main__":
    main()
