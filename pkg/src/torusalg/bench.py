"""Compare the compiled and pure-Python row-reduction kernels.

    python3 -m torusalg.bench [--size 40] [--repeat 5]

Also times one full E2 chart with each backend.
"""
import argparse
import random
import time

from . import _kernels_py, linalg


def _matrix(rng, n, m, density=0.12, bound=2):
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(m)] for _ in range(n)]


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(size=24, repeat=5, seed=0):
    rng = random.Random(seed)
    mats = [_matrix(rng, size, size + 5) for _ in range(10)]
    out = {"backend_available": linalg._compiled is not None}
    py = _time(lambda: [linalg.row_reduce(m, size + 5, backend="python") for m in mats], repeat)
    out["python_s"] = py
    if linalg._compiled is not None:
        cy = _time(lambda: [linalg.row_reduce(m, size + 5, backend="cython") for m in mats], repeat)
        out["cython_s"] = cy
        out["speedup"] = py / cy if cy else float("inf")
        for m in mats:
            if linalg.row_reduce(m, size + 5, backend="cython") != _kernels_py.row_reduce(m, size + 5):
                raise AssertionError("kernels disagree")
    return out


def run_chart(repeat=1):
    from .adams import ext
    from .cells import basic_cell
    from .lattice import trivial_subgroup
    f = trivial_subgroup(2)
    out = {}
    saved = linalg.BACKEND
    try:
        for b in ("python", "cython"):
            if b == "cython" and linalg._compiled is None:
                continue
            linalg.BACKEND = b
            out[b] = _time(lambda: ext(basic_cell(f), basic_cell(f), (-4, 16)), repeat)
    finally:
        linalg.BACKEND = saved
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=24)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    r = run(args.size, args.repeat)
    print(f"row_reduce {args.size}x{args.size + 5} x10: python {r['python_s']:.4f}s", end="")
    if "cython_s" in r:
        print(f", cython {r['cython_s']:.4f}s, speedup {r['speedup']:.1f}x")
    else:
        print(" (compiled kernel not built)")
    for b, t in run_chart().items():
        print(f"E2 chart End(sigma_1), rank 2, t in [-4, 16]: {b} {t:.3f}s")


if __name__ == "__main__":
    main()
