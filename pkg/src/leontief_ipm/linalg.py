"""Dense linear algebra layer shared by the model, solver, and oracle modules.

Vectors and matrices are plain float64 numpy arrays; :func:`as_matrix` and
:func:`as_vector` are the validating constructors. Linear solves go through a
partial-pivot LU with a scale-relative singularity threshold; nothing ever
materializes an inverse on the solve path.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, SingularMatrix

Matrix = np.ndarray
Vector = np.ndarray

# A pivot at or below PIVOT_REL_TOL * max|entry| counts as singular.
PIVOT_REL_TOL = 1e-12


def as_matrix(a) -> Matrix:
    """Coerce to a finite, C-ordered, 2-D float64 array (always a copy)."""
    out = np.array(a, dtype=np.float64, order="C", copy=True)
    if out.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={out.ndim}")
    if not np.isfinite(out).all():
        raise ValueError("matrix entries must be finite")
    return out


def as_vector(v) -> Vector:
    """Coerce to a finite 1-D float64 array (always a copy)."""
    out = np.array(v, dtype=np.float64, copy=True)
    if out.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D array, got ndim={out.ndim}")
    if not np.isfinite(out).all():
        raise ValueError("vector entries must be finite")
    return out


class LuFactors(NamedTuple):
    lu: Matrix
    perm: np.ndarray


def lu_factorization(a: Matrix) -> LuFactors:
    """Partial-pivot LU factors of a square matrix.

    Raises :class:`SingularMatrix` when a pivot magnitude falls to
    ``PIVOT_REL_TOL`` times the largest absolute entry or below.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got {a.shape}")
    lu = a
    perm = np.arange(a.shape[0], dtype=np.int64)
    bad = _kernels.lu_factor(lu, perm, PIVOT_REL_TOL)
    if bad >= 0:
        raise SingularMatrix(f"pivot below threshold at elimination column {bad}")
    return LuFactors(lu, perm)


def lu_backsolve(factors: LuFactors, rhs: Vector) -> Vector:
    """Solve against previously computed LU factors."""
    rhs = as_vector(rhs)
    if rhs.shape[0] != factors.lu.shape[0]:
        raise DimensionMismatch(
            f"rhs length {rhs.shape[0]} does not match system order {factors.lu.shape[0]}"
        )
    return _kernels.lu_solve_factored(factors.lu, factors.perm, rhs)


def lu_solve(a: Matrix, rhs: Vector) -> Vector:
    """Solve ``a @ x = rhs`` by LU with partial pivoting."""
    a = as_matrix(a)
    rhs = as_vector(rhs)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got {a.shape}")
    if rhs.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"rhs length {rhs.shape[0]} does not match system order {a.shape[0]}"
        )
    return lu_backsolve(lu_factorization(a), rhs)


def euclidean_norm(v: Vector) -> float:
    """sqrt of the sum of squared entries."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.sqrt(np.dot(v, v)))


def mat_vec(a: Matrix, v: Vector) -> Vector:
    if np.ndim(a) != 2 or np.ndim(v) != 1 or np.shape(a)[1] != np.shape(v)[0]:
        raise DimensionMismatch(
            f"cannot multiply shapes {np.shape(a)} and {np.shape(v)}"
        )
    return np.asarray(a, dtype=np.float64) @ np.asarray(v, dtype=np.float64)


def mat_mat(a: Matrix, b: Matrix) -> Matrix:
    if np.ndim(a) != 2 or np.ndim(b) != 2 or np.shape(a)[1] != np.shape(b)[0]:
        raise DimensionMismatch(
            f"cannot multiply shapes {np.shape(a)} and {np.shape(b)}"
        )
    return np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)


def transpose(a: Matrix) -> Matrix:
    if np.ndim(a) != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={np.ndim(a)}")
    return np.asarray(a, dtype=np.float64).T.copy()


def hadamard(u: Vector, v: Vector) -> Vector:
    """Componentwise product; realizes diag(u) @ v."""
    if np.ndim(u) != 1 or np.ndim(v) != 1 or np.shape(u) != np.shape(v):
        raise DimensionMismatch(
            f"cannot take componentwise product of shapes {np.shape(u)} and {np.shape(v)}"
        )
    return np.asarray(u, dtype=np.float64) * np.asarray(v, dtype=np.float64)
