"""Input-output economy builders and row-block matrix structure tests.

An open single-technology economy with technology matrix T and demand b
reduces to the square complementarity instance (M, q) = (I - T, -b). A
multi-technology economy contributes one row block per sector (one row per
candidate technology) and reduces to a vertical instance (N, q) with
N = E - A, where E carries a column of ones per sector block. The column-copy
embedding turns a vertical instance into an equivalent square one; solutions
travel back by summing the copies of each sector.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    EnumerationCapExceeded,
    ModelFormatError,
    SingularMatrix,
)
from .linalg import (
    Matrix,
    Vector,
    as_matrix,
    as_vector,
    lu_backsolve,
    lu_factorization,
)

# Off-diagonal entries above this break the Z-sign-pattern requirement.
Z_PATTERN_TOL = 1e-12
# Inverse entries this far below zero disqualify the M-matrix test.
INVERSE_NONNEG_TOL = 1e-9
# A principal minor counts as strictly positive only above this fraction of
# its Hadamard bound; as nonnegative when not below the negated fraction.
MINOR_REL_TOL = 1e-10
# Principal-minor sweeps are 2^k per representative; refuse larger orders.
MAX_MINOR_ORDER = 12

DEFAULT_ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class VerticalBlockMatrix:
    """m x k matrix row-partitioned into k blocks, block j of shape (m_j, k).

    Every block must have exactly k columns and at least one row, so the
    stacked matrix has m = sum(m_j) >= k rows.
    """

    blocks: tuple[Matrix, ...]

    def __post_init__(self):
        blocks = tuple(as_matrix(b) for b in self.blocks)
        k = len(blocks)
        if k == 0:
            raise DimensionMismatch("at least one block is required")
        for j, block in enumerate(blocks):
            if block.shape[0] < 1:
                raise DimensionMismatch(f"block {j} has no rows")
            if block.shape[1] != k:
                raise DimensionMismatch(
                    f"block {j} has {block.shape[1]} columns, expected {k}"
                )
        object.__setattr__(self, "blocks", blocks)

    @property
    def cols(self) -> int:
        return len(self.blocks)

    @property
    def rows(self) -> int:
        return sum(b.shape[0] for b in self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    def block_slices(self) -> tuple[slice, ...]:
        """Row range of each block within the stacked matrix."""
        out = []
        start = 0
        for size in self.block_sizes:
            out.append(slice(start, start + size))
            start += size
        return tuple(out)

    def dense(self) -> Matrix:
        return np.vstack(self.blocks)


@dataclass(frozen=True)
class LcpInstance:
    """Square instance: find z >= 0 with w = q + M z >= 0 and z'w = 0."""

    M: Matrix
    q: Vector

    def __post_init__(self):
        m = as_matrix(self.M)
        q = as_vector(self.q)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"M must be square, got {m.shape}")
        if q.shape[0] != m.shape[0]:
            raise DimensionMismatch(
                f"q length {q.shape[0]} does not match order {m.shape[0]}"
            )
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class VlcpInstance:
    """Vertical instance: w = q + N x with one zero per (x_j, block-j slacks)."""

    N: VerticalBlockMatrix
    q: Vector

    def __post_init__(self):
        q = as_vector(self.q)
        if q.shape[0] != self.N.rows:
            raise DimensionMismatch(
                f"q length {q.shape[0]} does not match total rows {self.N.rows}"
            )
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class GeneralizedLeontiefModel:
    """Per-sector technology rows and demands for a multi-technology economy.

    ``technology_blocks[j]`` has one row per candidate technology of sector j
    (coefficients against all ``sectors`` outputs); ``demand_blocks[j]`` holds
    the matching demands. Positive demand is production required this period,
    negative demand is stock already available.
    """

    sectors: int
    technology_blocks: tuple[Matrix, ...]
    demand_blocks: tuple[Vector, ...]

    def __post_init__(self):
        n = self.sectors
        if n < 1:
            raise DimensionMismatch("model needs at least one sector")
        techs = tuple(as_matrix(t) for t in self.technology_blocks)
        demands = tuple(as_vector(d) for d in self.demand_blocks)
        if len(techs) != n or len(demands) != n:
            raise DimensionMismatch(
                f"expected {n} technology and demand blocks, got "
                f"{len(techs)} and {len(demands)}"
            )
        for j, (tech, demand) in enumerate(zip(techs, demands)):
            if tech.shape[0] < 1:
                raise DimensionMismatch(f"sector {j} has no technologies")
            if tech.shape[1] != n:
                raise DimensionMismatch(
                    f"sector {j} technology rows have {tech.shape[1]} "
                    f"coefficients, expected {n}"
                )
            if demand.shape[0] != tech.shape[0]:
                raise DimensionMismatch(
                    f"sector {j} has {tech.shape[0]} technologies but "
                    f"{demand.shape[0]} demand entries"
                )
        object.__setattr__(self, "technology_blocks", techs)
        object.__setattr__(self, "demand_blocks", demands)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(t.shape[0] for t in self.technology_blocks)

    def is_single_technology(self) -> bool:
        return all(size == 1 for size in self.block_sizes)

    def open_components(self) -> tuple[Matrix, Vector]:
        """(T, b) of the open single-technology economy this model denotes."""
        if not self.is_single_technology():
            raise DimensionMismatch(
                "open components are only defined for single-technology models"
            )
        t = np.vstack(self.technology_blocks)
        b = np.concatenate(self.demand_blocks)
        return t, b


@dataclass(frozen=True)
class SectorDiagnostic:
    sector: int
    activity: float
    min_slack: float
    complementary: bool


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of checking a candidate activity vector against an instance."""

    ok: bool
    min_activity: float
    min_slack: float
    sectors: tuple[SectorDiagnostic, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class VlcpSolution:
    """Activity vector with its slacks and residual summary.

    ``complementarity_residual`` is the largest unmet minimum block slack
    among active sectors (0 when every active sector has a binding row);
    ``feasibility_residual`` is the largest sign violation of x or slack.
    """

    x: Vector
    slack: Vector
    complementarity_residual: float
    feasibility_residual: float


def build_open_leontief_lcp(T, b) -> LcpInstance:
    """Square instance (I - T, -b) of the open economy with technology T."""
    t = as_matrix(T)
    b = as_vector(b)
    if t.shape[0] != t.shape[1]:
        raise DimensionMismatch(f"technology matrix must be square, got {t.shape}")
    if b.shape[0] != t.shape[0]:
        raise DimensionMismatch(
            f"demand length {b.shape[0]} does not match {t.shape[0]} sectors"
        )
    return LcpInstance(np.eye(t.shape[0]) - t, -b)


def m_matrix_report(a) -> tuple[bool, str]:
    """Nonsingular-M-matrix verdict with a one-line reason.

    True requires the Z sign pattern (off-diagonals <= Z_PATTERN_TOL),
    a successful factorization, and a componentwise nonnegative inverse
    (entries >= -INVERSE_NONNEG_TOL).
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n != a.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got {a.shape}")
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    if off.size and off.max() > Z_PATTERN_TOL:
        i, j = np.unravel_index(int(np.argmax(off)), off.shape)
        return False, f"positive off-diagonal entry {a[i, j]:.3g} at ({i}, {j})"
    try:
        factors = lu_factorization(a)
    except SingularMatrix:
        return False, "matrix is singular at working precision"
    worst = 0.0
    for col in range(n):
        unit = np.zeros(n)
        unit[col] = 1.0
        inv_col = lu_backsolve(factors, unit)
        worst = min(worst, float(inv_col.min()))
    if worst < -INVERSE_NONNEG_TOL:
        return False, f"inverse has a negative entry ({worst:.3g})"
    return True, "nonsingular with componentwise nonnegative inverse"


def m_matrix_check(a) -> bool:
    """True iff ``a`` is a nonsingular M-matrix (see :func:`m_matrix_report`)."""
    ok, _ = m_matrix_report(a)
    return ok


def representative_submatrices(n_vert: VerticalBlockMatrix, cap: int = DEFAULT_ENUMERATION_CAP):
    """Yield every k x k submatrix taking row j from block j.

    Row choices run in lexicographic order, so the first matrix takes the
    first row of every block. Raises :class:`EnumerationCapExceeded` before
    yielding anything when the count prod(m_j) exceeds ``cap``.
    """
    sizes = n_vert.block_sizes
    count = math.prod(sizes)
    if count > cap:
        raise EnumerationCapExceeded(
            f"{count} representative submatrices exceed cap {cap}"
        )

    def generate():
        for choice in itertools.product(*(range(size) for size in sizes)):
            yield np.array(
                [n_vert.blocks[j][i] for j, i in enumerate(choice)], dtype=np.float64
            )

    return generate()


def _minor_flags(rep: Matrix, weak: bool) -> bool:
    dets, bounds = _kernels.principal_minor_dets(rep)
    tol = MINOR_REL_TOL * bounds
    if weak:
        return bool(np.all(dets >= -tol))
    return bool(np.all(dets > tol))


def is_vertical_block_P(
    n_vert: VerticalBlockMatrix,
    weak: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> bool:
    """True iff every representative submatrix has all principal minors > 0.

    With ``weak=True`` tests >= 0 instead. Minor signs are judged against a
    Hadamard-bound-scaled tolerance so that analytically zero determinants
    do not flip on rounding noise.
    """
    if n_vert.cols > MAX_MINOR_ORDER:
        raise EnumerationCapExceeded(
            f"principal-minor sweep limited to order {MAX_MINOR_ORDER}, "
            f"got {n_vert.cols}"
        )
    return all(_minor_flags(rep, weak) for rep in representative_submatrices(n_vert, cap))


def equivalent_square_matrix(n_vert: VerticalBlockMatrix) -> Matrix:
    """m x m matrix copying column j of the stacked matrix m_j times."""
    return np.repeat(n_vert.dense(), n_vert.block_sizes, axis=1)


def lift_vlcp_to_lcp(v: VlcpInstance) -> LcpInstance:
    """Square embedding of a vertical instance; q is carried over unchanged."""
    return LcpInstance(equivalent_square_matrix(v.N), v.q)


def solution_from_activity(v: VlcpInstance, x, tol: float = 1e-9) -> VlcpSolution:
    """Package an activity vector with its slacks and residual summary."""
    x = as_vector(x)
    if x.shape[0] != v.N.cols:
        raise DimensionMismatch(
            f"activity length {x.shape[0]} does not match {v.N.cols} sectors"
        )
    b = -v.q
    slack = v.N.dense() @ x - b
    feasibility = max(0.0, float(-x.min()), float(-slack.min()))
    complementarity = 0.0
    for j, sl in enumerate(v.N.block_slices()):
        if x[j] > tol:
            complementarity = max(complementarity, float(slack[sl].min()))
    complementarity = max(0.0, complementarity)
    return VlcpSolution(
        x=x,
        slack=slack,
        complementarity_residual=complementarity,
        feasibility_residual=feasibility,
    )


def recover_vlcp_solution(
    v: VlcpInstance, z: Vector, w: Vector, tol: float = 1e-9
) -> VlcpSolution:
    """Map a square-instance certificate pair back to sector activities.

    Sector activity is the sum of z over that sector's column copies; slacks
    are recomputed as N x - b (not read from w, which is only trusted as the
    certificate that produced z). Residuals are reported, never enforced.
    """
    z = as_vector(z)
    w = as_vector(w)
    m = v.N.rows
    if z.shape[0] != m or w.shape[0] != m:
        raise DimensionMismatch(
            f"certificate length {z.shape[0]}/{w.shape[0]} does not match {m} rows"
        )
    x = np.array([float(z[sl].sum()) for sl in v.N.block_slices()])
    return solution_from_activity(v, x, tol)


def verify_vlcp_solution(v: VlcpInstance, x, tol: float = 1e-8) -> VerificationResult:
    """Check nonnegativity, feasibility, and per-sector complementarity.

    Passes iff x >= -tol, N x - b >= -tol componentwise, and each sector is
    either inactive (|x_j| <= tol) or has a block row within ``tol`` of
    binding. The minimum block slack stands in for the row product, which
    the product form would under/overflow at economy scale.
    """
    x = as_vector(x)
    if x.shape[0] != v.N.cols:
        raise DimensionMismatch(
            f"activity length {x.shape[0]} does not match {v.N.cols} sectors"
        )
    b = -v.q
    slack = v.N.dense() @ x - b
    sectors = []
    ok = bool(x.min() >= -tol and slack.min() >= -tol)
    for j, sl in enumerate(v.N.block_slices()):
        min_slack = float(slack[sl].min())
        complementary = abs(float(x[j])) <= tol or min_slack <= tol
        ok = ok and complementary
        sectors.append(
            SectorDiagnostic(
                sector=j,
                activity=float(x[j]),
                min_slack=min_slack,
                complementary=complementary,
            )
        )
    return VerificationResult(
        ok=ok,
        min_activity=float(x.min()),
        min_slack=float(slack.min()),
        sectors=tuple(sectors),
    )


def build_generalized_leontief_vlcp(model: GeneralizedLeontiefModel) -> VlcpInstance:
    """Vertical instance (E - A, -b) of a multi-technology economy."""
    n = model.sectors
    blocks = []
    for j, tech in enumerate(model.technology_blocks):
        ones_col = np.zeros((tech.shape[0], n))
        ones_col[:, j] = 1.0
        blocks.append(ones_col - tech)
    q = -np.concatenate(model.demand_blocks)
    return VlcpInstance(VerticalBlockMatrix(tuple(blocks)), q)


def model_from_dict(doc) -> GeneralizedLeontiefModel:
    """Parse the model schema: {"sectors": n, "blocks": [{technology, demand}]}."""
    if not isinstance(doc, dict):
        raise ModelFormatError("model document must be a JSON object")
    try:
        sectors = doc["sectors"]
        blocks = doc["blocks"]
    except KeyError as exc:
        raise ModelFormatError(f"model document missing key {exc}") from exc
    if not isinstance(sectors, int) or isinstance(sectors, bool):
        raise ModelFormatError("'sectors' must be an integer")
    if not isinstance(blocks, list) or len(blocks) != sectors:
        raise ModelFormatError(f"'blocks' must be a list of {sectors} entries")
    techs = []
    demands = []
    for j, entry in enumerate(blocks):
        if not isinstance(entry, dict) or "technology" not in entry or "demand" not in entry:
            raise ModelFormatError(
                f"block {j} must be an object with 'technology' and 'demand'"
            )
        try:
            techs.append(as_matrix(entry["technology"]))
            demands.append(as_vector(entry["demand"]))
        except (DimensionMismatch, ValueError, TypeError) as exc:
            raise ModelFormatError(f"block {j} is malformed: {exc}") from exc
    try:
        return GeneralizedLeontiefModel(
            sectors=sectors,
            technology_blocks=tuple(techs),
            demand_blocks=tuple(demands),
        )
    except DimensionMismatch as exc:
        raise ModelFormatError(str(exc)) from exc


def load_model(path) -> GeneralizedLeontiefModel:
    """Load a model JSON file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid JSON in {path}: {exc}") from exc
    return model_from_dict(doc)
