#!/usr/bin/env python3
"""Benchmark the jit-compiled kernels against the plain numpy/Python path.

Kernel timings compare both implementations in-process (the compiled variants
are importable alongside the plain ones). End-to-end solver timings re-run
this script in a subprocess with LEONTIEF_IPM_DISABLE_NUMBA toggled, because
the backend is chosen at import time.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --skip-end-to-end
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from leontief_ipm import LcpInstance, _kernels, solve_lcp
from leontief_ipm.linalg import PIVOT_REL_TOL


def time_call(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_lu(sizes, repeats):
    rng = np.random.default_rng(0)
    print(f"{'n':>5} {'plain lu+solve':>16} {'active lu+solve':>16} {'speedup':>8}")
    for n in sizes:
        a = rng.uniform(-1.0, 1.0, (n, n)) + n * np.eye(n)
        rhs = rng.uniform(-1.0, 1.0, n)

        def run(factor, solve):
            lu = a.copy()
            perm = np.arange(n, dtype=np.int64)
            assert factor(lu, perm, PIVOT_REL_TOL) == -1
            return solve(lu, perm, rhs)

        plain = time_call(lambda: run(_kernels.py_lu_factor, _kernels.py_lu_solve_factored), repeats)
        active = time_call(lambda: run(_kernels.lu_factor, _kernels.lu_solve_factored), repeats)
        print(f"{n:>5} {plain * 1e3:>13.3f} ms {active * 1e3:>13.3f} ms {plain / active:>7.1f}x")


def bench_minors(orders, repeats):
    rng = np.random.default_rng(1)
    print(f"{'k':>5} {'plain minors':>16} {'active minors':>16} {'speedup':>8}")
    for k in orders:
        a = rng.normal(size=(k, k)) + k * np.eye(k)
        plain = time_call(lambda: _kernels.py_principal_minor_dets(a), repeats)
        active = time_call(lambda: _kernels.principal_minor_dets(a), repeats)
        print(f"{k:>5} {plain * 1e3:>13.3f} ms {active * 1e3:>13.3f} ms {plain / active:>7.1f}x")


def bench_solver(repeats):
    rng = np.random.default_rng(2)
    n = 60
    t = rng.uniform(0.0, 1.0, (n, n))
    t *= (rng.uniform(0.05, 0.9, n) / t.sum(axis=1))[:, None]
    lcp = LcpInstance(np.eye(n) - t, rng.uniform(-2.0, 2.0, n))
    report = solve_lcp(lcp)  # warm jit caches before timing
    elapsed = time_call(lambda: solve_lcp(lcp), repeats)
    print(
        f"backend={_kernels.BACKEND} solve(n={n}): {elapsed * 1e3:.1f} ms "
        f"({report.iterations} iterations, status {report.status.value})"
    )


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 150])
    parser.add_argument("--minor-orders", type=int, nargs="+", default=[8, 10])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--skip-end-to-end", action="store_true")
    parser.add_argument(
        "--solver-only",
        action="store_true",
        help="internal: print one end-to-end solver timing and exit",
    )
    args = parser.parse_args(argv)

    if args.solver_only:
        bench_solver(args.repeats)
        return 0

    print(f"active kernel backend: {_kernels.BACKEND}")
    if _kernels.BACKEND != "numba":
        print("numba is disabled or unavailable; both columns run the plain path")
    # warm the compiled kernels so compilation is not timed
    warm = np.eye(2)
    _kernels.lu_factor(warm.copy(), np.arange(2, dtype=np.int64), PIVOT_REL_TOL)
    _kernels.lu_solve_factored(np.eye(2), np.arange(2, dtype=np.int64), np.ones(2))
    _kernels.principal_minor_dets(warm)

    print("\npartial-pivot LU factor + solve")
    bench_lu(args.sizes, args.repeats)
    print("\nprincipal-minor sweep (2^k determinants)")
    bench_minors(args.minor_orders, args.repeats)

    if not args.skip_end_to_end:
        print("\nend-to-end interior-point solve under both backends", flush=True)
        for disable in ("0", "1"):
            env = dict(os.environ, LEONTIEF_IPM_DISABLE_NUMBA=disable)
            subprocess.run(
                [sys.executable, os.path.abspath(__file__), "--solver-only",
                 "--repeats", str(args.repeats)],
                env=env,
                check=True,
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
