"""Infeasible interior-point descent for square complementarity instances.

The solver keeps a strictly positive pair (z, w), never requiring w = q + Mz
along the way; the equation residual contracts by the factor (1 - alpha) at
every accepted step. Search directions are damped Newton steps on

    F(z, w) = (w - M z - q,  z*w - mu),    mu = sigma * z'w / n,

and a step is accepted only if the trial point stays inside a neighborhood of
the central trajectory (componentwise centrality plus a residual-coupling
condition) and achieves an Armijo decrease of the merit function

    phi(z, w) = sqrt(||w - M z - q||^2 + ||z*w||^2),

which vanishes exactly at solutions. Multi-technology (vertical) instances
are solved through their equivalent square embedding and mapped back.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    LineSearchFailure,
    RecoveryVerificationFailed,
    SingularMatrix,
    SingularNewtonSystem,
    ZeroMerit,
)
from .linalg import Matrix, Vector, euclidean_norm, lu_solve
from .model import (
    LcpInstance,
    VlcpInstance,
    VlcpSolution,
    lift_vlcp_to_lcp,
    recover_vlcp_solution,
    verify_vlcp_solution,
)

# Fraction of the positivity-limited step used as the first trial.
POSITIVITY_BACKOFF = 0.9995


class SolveStatus(enum.Enum):
    CONVERGED = "converged"
    ITERATION_LIMIT = "iteration_limit"
    LINE_SEARCH_FAILURE = "line_search_failure"
    SINGULAR_NEWTON_SYSTEM = "singular_newton_system"


@dataclass(frozen=True)
class SolverConfig:
    """Tunables of the descent iteration.

    delta            termination threshold on the merit value
    beta             Armijo constant in (0, 1/2]
    gamma            componentwise centrality constant in (0, 1)
    gamma_prime      residual-coupling constant > 0
    sigma            centering parameter in [0, 1)
    epsilon          residual acceptance level for neighborhood membership
    omega_star       iterate-norm bound, reported only (diagnostic)
    max_iterations   iteration cap
    backtrack_ratio  geometric backtracking ratio in (0, 1)
    max_backtracks   number of trial steps before giving up
    start_scale      value of every component of (z0, w0); None picks
                     max(10, ||q||_inf) per instance
    keep_iterates    retain full iterates and directions on the report
    """

    delta: float = 1e-6
    beta: float = 0.25
    gamma: float = 1e-3
    gamma_prime: float = 1.0
    sigma: float = 0.5
    epsilon: float = 1e-8
    omega_star: float = 1e12
    max_iterations: int = 500
    backtrack_ratio: float = 0.5
    max_backtracks: int = 60
    start_scale: float | None = None
    keep_iterates: bool = False

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not 0 < self.beta <= 0.5:
            raise ValueError("beta must lie in (0, 1/2]")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if not self.gamma_prime > 0:
            raise ValueError("gamma_prime must be positive")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.omega_star > 0:
            raise ValueError("omega_star must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if not 0 < self.backtrack_ratio < 1:
            raise ValueError("backtrack_ratio must lie in (0, 1)")
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be at least 1")
        if self.start_scale is not None and not self.start_scale > 0:
            raise ValueError("start_scale must be positive")

    @property
    def epsilon_bar(self) -> float:
        """Gap floor min(epsilon, gamma_prime * epsilon)."""
        return min(self.epsilon, self.gamma_prime * self.epsilon)


@dataclass(frozen=True)
class IterateState:
    """A strictly positive trajectory point with its derived quantities."""

    z: Vector
    w: Vector
    mu: float
    merit: float
    residual: Vector
    gap: float


@dataclass(frozen=True)
class Direction:
    """Newton direction with its per-iterate bound realizations.

    eta1 bounds the componentwise cross terms |dz_i dw_i - gamma dz'dw / n|,
    eta2 is |dz'dw|; step_floor is the closed-form lower bound
    min(1, sigma*eps_bar*(1-gamma)/(n*eta1), mu/eta2), a diagnostic only.
    """

    d_z: Vector
    d_w: Vector
    eta1: float
    eta2: float
    step_floor: float


@dataclass(frozen=True)
class TraceRecord:
    k: int
    mu: float
    alpha: float
    merit: float
    gap: float
    residual_norm: float
    step_floor: float


@dataclass(frozen=True)
class SolveReport:
    """Everything a run produced; final.merit <= delta iff converged."""

    status: SolveStatus
    iterations: int
    final: IterateState
    trace: tuple[TraceRecord, ...]
    warnings: tuple[str, ...] = ()
    iterates: tuple[IterateState, ...] | None = None
    directions: tuple[Direction, ...] | None = None


_DEFAULT_CONFIG = SolverConfig()


def merit(z: Vector, w: Vector, M: Matrix, q: Vector) -> float:
    """phi = sqrt(||w - M z - q||^2 + ||z*w||^2); zero exactly at solutions."""
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if z.shape != w.shape or np.shape(M) != (z.shape[0], z.shape[0]) or np.shape(q) != z.shape:
        raise DimensionMismatch(
            f"non-conformable merit operands: z {z.shape}, w {w.shape}, "
            f"M {np.shape(M)}, q {np.shape(q)}"
        )
    r = w - M @ z - q
    p = z * w
    return float(np.sqrt(np.dot(r, r) + np.dot(p, p)))


def evaluate_iterate(z: Vector, w: Vector, lcp: LcpInstance, sigma: float) -> IterateState:
    """Package (z, w) with residual, gap, merit, and refreshed mu."""
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    residual = w - lcp.M @ z - lcp.q
    products = z * w
    gap = float(products.sum())
    value = float(np.sqrt(np.dot(residual, residual) + np.dot(products, products)))
    return IterateState(
        z=z,
        w=w,
        mu=sigma * gap / lcp.n,
        merit=value,
        residual=residual,
        gap=gap,
    )


def newton_direction(
    state: IterateState,
    lcp: LcpInstance,
    sigma: float,
    config: SolverConfig | None = None,
) -> Direction:
    """Solve the scaled Newton system for the descent direction.

    d_z solves (Z M + W) d_z = mu e - z*(M z + q) and
    d_w = M (z + d_z) - w + q, so the first block equation holds by
    construction and the second to factorization accuracy.
    """
    cfg = config if config is not None else _DEFAULT_CONFIG
    z, w = state.z, state.w
    n = lcp.n
    mu = sigma * state.gap / n
    coeff = z[:, None] * lcp.M
    coeff[np.arange(n), np.arange(n)] += w
    rhs = mu - z * (lcp.M @ z + lcp.q)
    try:
        d_z = lu_solve(coeff, rhs)
    except SingularMatrix as exc:
        raise SingularNewtonSystem(
            f"scaled Newton matrix ZM + W is singular: {exc}"
        ) from exc
    d_w = lcp.M @ (z + d_z) - w + lcp.q
    cross = float(d_z @ d_w)
    eta1 = float(np.max(np.abs(d_z * d_w - cfg.gamma * cross / n)))
    eta2 = abs(cross)
    floor = 1.0
    if eta1 > 0.0:
        floor = min(floor, sigma * cfg.epsilon_bar * (1.0 - cfg.gamma) / (n * eta1))
    if eta2 > 0.0:
        floor = min(floor, mu / eta2)
    return Direction(d_z=d_z, d_w=d_w, eta1=eta1, eta2=eta2, step_floor=floor)


def grad_merit_dot_direction(
    state: IterateState, lcp: LcpInstance, direction: Direction
) -> float:
    """Directional derivative of the merit function along (d_z, d_w).

    Computed as the residual map dotted with its Jacobian action on the
    direction, never by forming the gradient vector:
    (r'(d_w - M d_z) + (z*w)'(w*d_z + z*d_w)) / phi.
    """
    phi = state.merit
    if phi == 0.0:
        raise ZeroMerit("merit is exactly zero; the point already solves the instance")
    d_z, d_w = direction.d_z, direction.d_w
    jd_top = d_w - lcp.M @ d_z
    jd_bottom = state.w * d_z + state.z * d_w
    return float((state.residual @ jd_top + (state.z * state.w) @ jd_bottom) / phi)


def neighborhood_contains(
    z: Vector, w: Vector, lcp: LcpInstance, config: SolverConfig
) -> bool:
    """Membership in the central-trajectory neighborhood.

    Requires strict positivity, componentwise centrality
    z_i w_i >= gamma * z'w / n, and either the residual-coupled gap
    z'w >= gamma_prime * ||w - M z - q|| or a residual below epsilon.
    """
    z = np.asarray(z, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if not (np.all(z > 0.0) and np.all(w > 0.0)):
        return False
    products = z * w
    gap = float(products.sum())
    if np.any(products < config.gamma * gap / z.shape[0]):
        return False
    residual_norm = euclidean_norm(w - lcp.M @ z - lcp.q)
    return gap >= config.gamma_prime * residual_norm or residual_norm <= config.epsilon


def _max_positive_step(v: Vector, dv: Vector) -> float:
    negative = dv < 0.0
    if not negative.any():
        return np.inf
    return float(np.min(-v[negative] / dv[negative]))


def step_length(
    state: IterateState,
    direction: Direction,
    lcp: LcpInstance,
    config: SolverConfig,
) -> float:
    """Backtrack from the positivity-clipped unit step to an acceptable alpha.

    Acceptance means: strictly positive trial point, neighborhood membership,
    and the Armijo inequality
    phi(trial) - phi(current) <= alpha * beta * grad_phi'direction.
    """
    z, w = state.z, state.w
    d_z, d_w = direction.d_z, direction.d_w
    feasible = min(_max_positive_step(z, d_z), _max_positive_step(w, d_w))
    alpha = 1.0 if np.isinf(feasible) else min(1.0, POSITIVITY_BACKOFF * feasible)
    if state.merit == 0.0:
        slope = 0.0
    else:
        slope = grad_merit_dot_direction(state, lcp, direction)
    for _ in range(config.max_backtracks):
        trial_z = z + alpha * d_z
        trial_w = w + alpha * d_w
        if (
            np.all(trial_z > 0.0)
            and np.all(trial_w > 0.0)
            and neighborhood_contains(trial_z, trial_w, lcp, config)
        ):
            trial_merit = merit(trial_z, trial_w, lcp.M, lcp.q)
            if trial_merit - state.merit <= alpha * config.beta * slope:
                return alpha
        alpha *= config.backtrack_ratio
    raise LineSearchFailure(
        f"no acceptable step within {config.max_backtracks} backtracking trials"
    )


def solve_lcp(lcp: LcpInstance, config: SolverConfig | None = None) -> SolveReport:
    """Run the descent iteration from z0 = w0 = start_scale * e.

    Returns a report rather than raising on algorithmic failure: singular
    Newton systems and exhausted line searches become terminal statuses so
    the trace up to the failure stays available. The trace carries one record
    per iterate (iterations + 1 rows); each non-final record stores the mu,
    alpha, and step-floor used to leave that iterate.
    """
    cfg = config if config is not None else SolverConfig()
    n = lcp.n
    if cfg.start_scale is not None:
        scale = cfg.start_scale
    else:
        scale = max(10.0, float(np.abs(lcp.q).max()) if n else 10.0)
    state = evaluate_iterate(np.full(n, scale), np.full(n, scale), lcp, cfg.sigma)
    trace: list[TraceRecord] = []
    notes: list[str] = []
    iterates = [state] if cfg.keep_iterates else None
    directions: list[Direction] | None = [] if cfg.keep_iterates else None
    k = 0
    status = SolveStatus.ITERATION_LIMIT
    while True:
        if state.merit <= cfg.delta:
            status = SolveStatus.CONVERGED
            break
        if k >= cfg.max_iterations:
            status = SolveStatus.ITERATION_LIMIT
            break
        pair_norm = float(np.sqrt(state.z @ state.z + state.w @ state.w))
        if pair_norm > cfg.omega_star:
            notes.append(
                f"iteration {k}: iterate norm {pair_norm:.6e} exceeds bound "
                f"{cfg.omega_star:.6e}"
            )
        if state.gap < cfg.epsilon_bar:
            notes.append(
                f"iteration {k}: gap {state.gap:.6e} fell below floor "
                f"{cfg.epsilon_bar:.6e} before convergence"
            )
        try:
            direction = newton_direction(state, lcp, cfg.sigma, cfg)
        except SingularNewtonSystem:
            status = SolveStatus.SINGULAR_NEWTON_SYSTEM
            break
        try:
            alpha = step_length(state, direction, lcp, cfg)
        except LineSearchFailure:
            status = SolveStatus.LINE_SEARCH_FAILURE
            break
        trace.append(
            TraceRecord(
                k=k,
                mu=state.mu,
                alpha=alpha,
                merit=state.merit,
                gap=state.gap,
                residual_norm=euclidean_norm(state.residual),
                step_floor=direction.step_floor,
            )
        )
        if cfg.keep_iterates:
            directions.append(direction)
        state = evaluate_iterate(
            state.z + alpha * direction.d_z,
            state.w + alpha * direction.d_w,
            lcp,
            cfg.sigma,
        )
        if cfg.keep_iterates:
            iterates.append(state)
        k += 1
    trace.append(
        TraceRecord(
            k=k,
            mu=state.mu,
            alpha=0.0,
            merit=state.merit,
            gap=state.gap,
            residual_norm=euclidean_norm(state.residual),
            step_floor=0.0,
        )
    )
    return SolveReport(
        status=status,
        iterations=k,
        final=state,
        trace=tuple(trace),
        warnings=tuple(notes),
        iterates=tuple(iterates) if iterates is not None else None,
        directions=tuple(directions) if directions is not None else None,
    )


def solve_vlcp(
    v: VlcpInstance, config: SolverConfig | None = None
) -> tuple[SolveReport, VlcpSolution]:
    """Solve a vertical instance through its equivalent square embedding.

    On convergence the recovered activity vector must verify at
    tol = max(10 * delta, 1e-6); otherwise :class:`RecoveryVerificationFailed`
    is raised with the report and solution attached. Non-converged runs
    return the best-effort recovery without verification.
    """
    cfg = config if config is not None else SolverConfig()
    report = solve_lcp(lift_vlcp_to_lcp(v), cfg)
    tol = max(10.0 * cfg.delta, 1e-6)
    solution = recover_vlcp_solution(v, report.final.z, report.final.w, tol)
    if report.status is SolveStatus.CONVERGED:
        verdict = verify_vlcp_solution(v, solution.x, tol)
        if not verdict.ok:
            offending = [d for d in verdict.sectors if not d.complementary]
            if offending:
                worst = offending[0]
                detail = (
                    f"sector {worst.sector} active at {worst.activity:.3e} "
                    f"with min slack {worst.min_slack:.3e}"
                )
            else:
                detail = (
                    f"min activity {verdict.min_activity:.3e}, "
                    f"min slack {verdict.min_slack:.3e}"
                )
            raise RecoveryVerificationFailed(
                "converged certificate failed activity verification at "
                f"tol={tol:.3e}: {detail}",
                report=report,
                solution=solution,
            )
    return report, solution
