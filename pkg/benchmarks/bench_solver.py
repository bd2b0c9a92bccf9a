"""Time the compiled and pure-Python hinge solvers on the same problems.

Usage: python benchmarks/bench_solver.py [--n 400] [--d 31] [--repeat 3]
"""
import argparse
import time

import numpy as np

from mwsn import _core


def make_problem(n, d, seed=0):
    r = np.random.default_rng(seed)
    X = np.hstack([r.standard_normal((n, d - 1)), np.ones((n, 1))])
    y = np.where(X[:, :3].sum(axis=1) + 0.5 * r.standard_normal(n) > 0, 1.0, -1.0)
    return np.ascontiguousarray(X), y


def bench(backend, X, y, repeat, max_iter):
    mod = _core.get_backend(backend)
    best, result = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = mod.dcd_hinge(X, y, 1.0, 1e-6, max_iter, 0)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--d", type=int, default=31, help="feature count incl. bias column")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-iter", type=int, default=2000)
    args = ap.parse_args()

    X, y = make_problem(args.n, args.d)
    backends = ["python"] + (["cython"] if _core.compiled_available() else [])
    results = {}
    for b in backends:
        t, (w, _, it) = bench(b, X, y, args.repeat, args.max_iter)
        results[b] = (t, w, it)
        print(f"{b:>7}: {t * 1e3:9.2f} ms  ({it} epochs, n={args.n}, d={args.d})")
    if len(results) == 2:
        tp, wp, _ = results["python"]
        tc, wc, _ = results["cython"]
        print(f"speedup: {tp / tc:.1f}x   max |w_python - w_cython| = {np.abs(wp - wc).max():.2e}")
    else:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
