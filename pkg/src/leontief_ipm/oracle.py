"""Exhaustive ground-truth solvers for small instances.

Square instances are solved by sweeping all 2^n complementary supports;
vertical instances by sweeping, per sector, inactivity or one binding row.
Correctness over speed: these double as uniqueness probes and as the
independent route the interior-point results are checked against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, SingularMatrix
from .linalg import Vector, lu_solve
from .model import (
    LcpInstance,
    VlcpInstance,
    VlcpSolution,
    solution_from_activity,
    verify_vlcp_solution,
)

SIGN_TOL = 1e-9


@dataclass(frozen=True)
class OracleSolution:
    """Support-basis certificate; the pinned entries of z and w are exact zeros."""

    z: Vector
    w: Vector
    support: tuple[int, ...]
    eq_residual: float
    comp_residual: float


def enumerate_lcp_solutions(lcp: LcpInstance, n_cap: int = 16) -> list[OracleSolution]:
    """All complementary-support solutions of a square instance.

    Sweeps every support S in ascending bitmask order (bit i selects index i),
    solves M[S,S] z_S = -q_S with the complement pinned at zero, and keeps
    candidates whose z and w stay above -SIGN_TOL. Singular subsystems are
    skipped. Results are deduplicated by effective support (entries above
    SIGN_TOL), first hit wins.
    """
    n = lcp.n
    if n > n_cap:
        raise CapExceeded(f"support enumeration of order {n} exceeds cap {n_cap}")
    seen: set[tuple[int, ...]] = set()
    out: list[OracleSolution] = []
    for mask in range(1 << n):
        support = [i for i in range(n) if (mask >> i) & 1]
        z = np.zeros(n)
        if support:
            sub = lcp.M[np.ix_(support, support)]
            try:
                z[support] = lu_solve(sub, -lcp.q[support])
            except SingularMatrix:
                continue
        w = lcp.q + lcp.M @ z
        w[support] = 0.0
        if z.min() < -SIGN_TOL or w.min() < -SIGN_TOL:
            continue
        z = np.maximum(z, 0.0)
        w = np.maximum(w, 0.0)
        effective = tuple(i for i in range(n) if z[i] > SIGN_TOL)
        if effective in seen:
            continue
        seen.add(effective)
        out.append(
            OracleSolution(
                z=z,
                w=w,
                support=effective,
                eq_residual=float(np.abs(w - lcp.q - lcp.M @ z).max()),
                comp_residual=float(np.abs(z * w).max()),
            )
        )
    return out


def enumerate_vlcp_solutions(v: VlcpInstance, cap: int = 1_000_000) -> list[VlcpSolution]:
    """All basic solutions of a vertical instance.

    For every subset of active sectors (ascending bitmask order) and every
    lexicographic choice of one binding row per active sector, solves the
    binding system restricted to the active columns and keeps candidates that
    verify at SIGN_TOL. The sweep size prod(m_j) * 2^k must stay within
    ``cap``. Deduplicates by the rounded activity vector.
    """
    sizes = v.N.block_sizes
    k = v.N.cols
    work = math.prod(sizes) * (1 << k)
    if work > cap:
        raise CapExceeded(f"binding-row sweep of size {work} exceeds cap {cap}")
    dense = v.N.dense()
    b = -v.q
    slices = v.N.block_slices()
    out: list[VlcpSolution] = []
    seen: set[tuple[float, ...]] = set()
    for mask in range(1 << k):
        active = [j for j in range(k) if (mask >> j) & 1]
        row_options = [range(slices[j].start, slices[j].stop) for j in active]
        for rows in itertools.product(*row_options):
            x = np.zeros(k)
            if active:
                sub = dense[np.ix_(list(rows), active)]
                try:
                    x[active] = lu_solve(sub, b[list(rows)])
                except SingularMatrix:
                    continue
            if not verify_vlcp_solution(v, x, SIGN_TOL).ok:
                continue
            key = tuple(float(r) for r in np.round(x, 9))
            if key in seen:
                continue
            seen.add(key)
            out.append(solution_from_activity(v, x, SIGN_TOL))
    return out
