"""Hot numeric kernels: partial-pivot LU and principal-minor sweeps.

The ``py_*`` functions are plain numpy/Python and always available. At import
time the public names (``lu_factor``, ``lu_solve_factored``,
``principal_minor_dets``) are bound to numba ``@njit``-compiled versions of
the same functions, unless numba is missing or the environment variable
``LEONTIEF_IPM_DISABLE_NUMBA`` is set to 1/true/yes, in which case the plain
versions are used. ``BACKEND`` records which path is active.

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np


def py_lu_factor(a, perm, rel_tol):
    """Factor ``a`` in place into L\\U with partial pivoting.

    ``perm`` (int64, preset to arange) receives the row permutation:
    ``perm[i]`` is the original index of the row now in position ``i``.
    Returns -1 on success, else the elimination column whose pivot magnitude
    fell to ``rel_tol`` times the largest absolute entry of the input or
    below (the input's scale, not the partially eliminated one).
    """
    n = a.shape[0]
    amax = 0.0
    for i in range(n):
        for j in range(n):
            v = abs(a[i, j])
            if v > amax:
                amax = v
    threshold = rel_tol * amax
    for k in range(n):
        p = k
        best = abs(a[k, k])
        for i in range(k + 1, n):
            v = abs(a[i, k])
            if v > best:
                best = v
                p = i
        if best <= threshold:
            return k
        if p != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[p, j]
                a[p, j] = tmp
            tmp_i = perm[k]
            perm[k] = perm[p]
            perm[p] = tmp_i
        pivot = a[k, k]
        for i in range(k + 1, n):
            lik = a[i, k] / pivot
            a[i, k] = lik
            for j in range(k + 1, n):
                a[i, j] -= lik * a[k, j]
    return -1


def py_lu_solve_factored(lu, perm, b):
    """Solve with L\\U factors from ``py_lu_factor`` (unit lower diagonal)."""
    n = lu.shape[0]
    x = np.empty(n, dtype=np.float64)
    for i in range(n):
        s = b[perm[i]]
        for j in range(i):
            s -= lu[i, j] * x[j]
        x[i] = s
    for i in range(n - 1, -1, -1):
        s = x[i]
        for j in range(i + 1, n):
            s -= lu[i, j] * x[j]
        x[i] = s / lu[i, i]
    return x


def py_principal_minor_dets(a):
    """Determinant and Hadamard bound of every principal submatrix.

    For an n x n matrix returns two arrays of length 2**n - 1 indexed by
    ``mask - 1`` where bit ``i`` of ``mask`` selects row/column ``i``:
    the determinant of the principal submatrix, and the product of the
    submatrix row 2-norms (an upper bound on |det|, used by callers to set
    scale-aware sign tolerances). Exactly zero pivots short-circuit to a
    zero determinant; no tolerance is applied here.
    """
    n = a.shape[0]
    total = (1 << n) - 1
    dets = np.empty(total, dtype=np.float64)
    bounds = np.empty(total, dtype=np.float64)
    idx = np.empty(n, dtype=np.int64)
    sub = np.empty((n, n), dtype=np.float64)
    for mask in range(1, total + 1):
        k = 0
        for i in range(n):
            if (mask >> i) & 1:
                idx[k] = i
                k += 1
        bound = 1.0
        for r in range(k):
            row_sq = 0.0
            for c in range(k):
                v = a[idx[r], idx[c]]
                sub[r, c] = v
                row_sq += v * v
            bound *= np.sqrt(row_sq)
        bounds[mask - 1] = bound
        det = 1.0
        sign = 1.0
        for col in range(k):
            p = col
            best = abs(sub[col, col])
            for i in range(col + 1, k):
                v = abs(sub[i, col])
                if v > best:
                    best = v
                    p = i
            if best == 0.0:
                det = 0.0
                break
            if p != col:
                for j in range(k):
                    tmp = sub[col, j]
                    sub[col, j] = sub[p, j]
                    sub[p, j] = tmp
                sign = -sign
            pivot = sub[col, col]
            det *= pivot
            for i in range(col + 1, k):
                f = sub[i, col] / pivot
                for j in range(col + 1, k):
                    sub[i, j] -= f * sub[col, j]
        dets[mask - 1] = det * sign
    return dets, bounds


def _numba_disabled():
    flag = os.environ.get("LEONTIEF_IPM_DISABLE_NUMBA", "")
    return flag.strip().lower() in ("1", "true", "yes")


BACKEND = "numpy"
if not _numba_disabled():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        BACKEND = "numba"

if BACKEND == "numba":
    lu_factor = njit(cache=True)(py_lu_factor)
    lu_solve_factored = njit(cache=True)(py_lu_solve_factored)
    principal_minor_dets = njit(cache=True)(py_principal_minor_dets)
else:
    lu_factor = py_lu_factor
    lu_solve_factored = py_lu_solve_factored
    principal_minor_dets = py_principal_minor_dets
