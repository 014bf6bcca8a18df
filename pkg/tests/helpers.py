"""Shared fixtures-by-import: the worked three-sector economy, instance
generators, and the per-iteration invariant checker."""

import numpy as np

from leontief_ipm import (
    GeneralizedLeontiefModel,
    LcpInstance,
    VerticalBlockMatrix,
    VlcpInstance,
)
from leontief_ipm.ipm import grad_merit_dot_direction, neighborhood_contains

# Two competing technology matrices for a three-sector economy (shoes, food,
# light bulbs) and the common demand vector. Both technologies are
# column-stochastic, so the single-technology economy is degenerate while the
# two-technology one has the unique solution X_STAR below.
TECH_A = np.array(
    [
        [0.6, 0.1, 0.3],
        [0.3, 0.6, 0.1],
        [0.1, 0.3, 0.6],
    ]
)
TECH_B = np.array(
    [
        [0.5, 0.2, 0.3],
        [0.4, 0.2, 0.4],
        [0.1, 0.6, 0.3],
    ]
)
DEMAND = np.array([150.0, -500.0, -20.0])

# Exact solution of the two-technology economy: sectors 1 and 3 run their
# first technology at a binding level, sector 2 stays inactive. Solves
# 0.4 x1 - 0.3 x3 = 150, -0.1 x1 + 0.4 x3 = -20.
X_STAR = np.array([5400.0 / 13.0, 0.0, 700.0 / 13.0])
SLACK_STAR = np.array([0.0, 540.0 / 13.0, 370.0, 4060.0 / 13.0, 0.0, 210.0 / 13.0])

# Stacked coefficient rows of the two-technology economy, block j holding
# (e_j - TECH_A[j], e_j - TECH_B[j]).
N_DENSE = np.array(
    [
        [0.4, -0.1, -0.3],
        [0.5, -0.2, -0.3],
        [-0.3, 0.4, -0.1],
        [-0.4, 0.8, -0.4],
        [-0.1, -0.3, 0.4],
        [-0.1, -0.6, 0.7],
    ]
)
B_STACKED = np.array([150.0, 150.0, -500.0, -500.0, -20.0, -20.0])


def two_technology_model() -> GeneralizedLeontiefModel:
    """The three-sector economy with technologies TECH_A and TECH_B."""
    techs = tuple(
        np.vstack([TECH_A[j], TECH_B[j]]) for j in range(3)
    )
    demands = tuple(np.array([DEMAND[j], DEMAND[j]]) for j in range(3))
    return GeneralizedLeontiefModel(
        sectors=3, technology_blocks=techs, demand_blocks=demands
    )


def random_m_matrix_lcp(rng, n: int) -> LcpInstance:
    """Instance (I - T, q) with T >= 0, row sums in [0.05, 0.9], mixed-sign q."""
    t = rng.uniform(0.0, 1.0, (n, n))
    t *= (rng.uniform(0.05, 0.9, n) / t.sum(axis=1))[:, None]
    q = rng.uniform(-2.0, 2.0, n)
    return LcpInstance(np.eye(n) - t, q)


def random_vertical_instance(rng, k_max: int = 4, m_max: int = 3) -> VlcpInstance:
    """Random vertical instance, half economy-shaped and half unstructured."""
    k = int(rng.integers(1, k_max + 1))
    sizes = [int(rng.integers(1, m_max + 1)) for _ in range(k)]
    if rng.uniform() < 0.5:
        blocks = []
        for j, rows in enumerate(sizes):
            tech = rng.uniform(0.0, 1.0, (rows, k))
            tech *= (rng.uniform(0.05, 0.9, rows) / tech.sum(axis=1))[:, None]
            e_rows = np.zeros((rows, k))
            e_rows[:, j] = 1.0
            blocks.append(e_rows - tech)
    else:
        blocks = [rng.normal(0.0, 1.0, (rows, k)) for rows in sizes]
    q = rng.uniform(-2.0, 2.0, sum(sizes))
    return VlcpInstance(VerticalBlockMatrix(tuple(blocks)), q)


def check_run_invariants(lcp, report, cfg):
    """Every per-iteration identity, inequality, and membership the descent
    iteration promises; needs a report produced with keep_iterates=True."""
    n = lcp.n
    sigma = cfg.sigma
    assert len(report.trace) == report.iterations + 1
    for k in range(report.iterations):
        state = report.iterates[k]
        nxt = report.iterates[k + 1]
        d = report.directions[k]
        alpha = report.trace[k].alpha

        # residual scaling: next residual = (1 - alpha) * current residual
        scaled = (1.0 - alpha) * state.residual
        assert np.abs(nxt.residual - scaled).max() <= 1e-8 * (
            1.0 + np.abs(state.residual).max()
        )

        # aggregated Newton identity z'dw + w'dz = -z'w + n*mu
        lhs = float(state.z @ d.d_w + state.w @ d.d_z)
        rhs = -state.gap + n * state.mu
        assert abs(lhs - rhs) <= 1e-8 * (1.0 + abs(state.gap))

        # descent condition; the slope is computed through the LU-solved
        # direction, so it carries the Newton-solve residual (1e-9 relative
        # promise) as an absolute floor on top of the 1e-7 relative slack.
        # The floor only matters at nearly centered iterates, where the
        # exact-arithmetic margin is zero.
        slope = grad_merit_dot_direction(state, lcp, d)
        bottom_rhs = -(state.z * state.w) + state.mu
        solve_floor = float(np.sqrt(n) * 1e-9 * (1.0 + np.abs(bottom_rhs).max()))
        assert (
            slope
            <= -(1.0 - sigma) * state.merit + 1e-7 * state.merit + solve_floor
        )

        # monotone merit decrease
        assert nxt.merit <= (1.0 - alpha * cfg.beta * (1.0 - sigma)) * state.merit + 1e-9

        # strict positivity and neighborhood membership of accepted iterates
        assert nxt.z.min() > 0.0 and nxt.w.min() > 0.0
        assert neighborhood_contains(nxt.z, nxt.w, lcp, cfg)

        # centrality and residual-coupling margins at the accepted step
        products = nxt.z * nxt.w
        assert (products - cfg.gamma * nxt.gap / n).min() >= -1e-12 * (1.0 + nxt.gap)
        residual_norm = float(np.sqrt(nxt.residual @ nxt.residual))
        if residual_norm > cfg.epsilon:
            assert nxt.gap - cfg.gamma_prime * residual_norm >= -1e-12 * (1.0 + nxt.gap)

        # Newton block equations
        top_rhs = lcp.M @ state.z - state.w + lcp.q
        top = -lcp.M @ d.d_z + d.d_w
        assert np.abs(top - top_rhs).max() <= 1e-9 * (1.0 + np.abs(top_rhs).max())
        bottom = state.w * d.d_z + state.z * d.d_w
        assert np.abs(bottom - bottom_rhs).max() <= 1e-9 * (1.0 + np.abs(bottom_rhs).max())
