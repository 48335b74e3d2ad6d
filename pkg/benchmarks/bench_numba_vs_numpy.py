"""Time the SMO solver on its numba-compiled loops and on the numpy fallback.

    python benchmarks/bench_numba_vs_numpy.py [--sizes 500 2000 5000] [--repeat 3]

Both paths solve the same problem and must agree on the iteration count.
"""

import argparse
import time

import numpy as np

from treesvm import _kernels
from treesvm._accel import numba
from treesvm.data_io import apply_scaler, fit_scaler, synth_blobs


def problem(n, seed=0):
    ds = synth_blobs(2, n // 2, 5, 0.6, seed)
    ds = apply_scaler(fit_scaler(ds), ds)
    X = np.ascontiguousarray(ds.X)
    return X, np.einsum("ij,ij->i", X, X), np.where(ds.y == 1, 1.0, -1.0)


def best_time(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 2000, 5000])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--C", type=float, default=1.0)
    args = ap.parse_args()

    # compile outside the timed region even when the package was imported with numba disabled
    jit = _kernels.smo_numba or numba.njit(_kernels._smo_loops)
    X, sqn, y = problem(50)
    jit(X, sqn, y, _kernels.RBF, args.gamma, args.C, 1e-3, 10_000, 50)

    print(f"{'n':>6} {'iters':>7} {'numba_s':>9} {'numpy_s':>9} {'speedup':>8}")
    for n in args.sizes:
        X, sqn, y = problem(n)
        call = (X, sqn, y, _kernels.RBF, args.gamma, args.C, 1e-3, 100 * n + 1_000_000, n)
        t_jit, (a1, _, it1, _) = best_time(jit, call, args.repeat)
        t_np, (a2, _, it2, _) = best_time(_kernels._smo_numpy, call, args.repeat)
        if it1 != it2 or not np.allclose(a1, a2, atol=1e-8):
            raise SystemExit(f"n={n}: paths disagree ({it1} vs {it2} iterations)")
        print(f"{n:>6} {it1:>7} {t_jit:>9.3f} {t_np:>9.3f} {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
