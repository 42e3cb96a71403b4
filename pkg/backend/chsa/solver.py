"""Active-set solver for the simplex-constrained elastic-net regression.

The problem for one point x with neighbor offsets d_j = x_j - x is

    min_w  gamma ||w||^2 + lambda ||w||_1 + ||sum_j w_j d_j||^2
    s.t.   sum_j w_j = 1

which on the constraint equals the regression on x_j themselves. Writing
w = u - v with u, v >= 0 turns it into a convex QP in 2N variables with one
equality constraint. The primal active-set method below keeps at most one of
u_j, v_j free, so the reduced Hessian stays positive definite whenever
gamma > 0. With gamma = 0 the subproblems are solved with a small ridge
proportional to the mean squared offset, and the returned point is checked
against the unregularized stationarity conditions. Each equality-constrained
subproblem is solved in the null space of the constraint as a stacked
least-squares problem; this avoids forming the normal equations, whose
condition number grows like 1 / gamma.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lstsq, null_space

from core.errors import SolverDivergence

logger = logging.getLogger(__name__)

# multipliers above -DUAL_SLACK * eps * scale count as nonnegative
DUAL_SLACK = 1e3

# ridge, relative to the mean squared offset, used when gamma is zero
RIDGE = 1e-12


@dataclass(frozen=True)
class ActiveSetOutcome:
    weights: np.ndarray
    iterations: int
    stationarity: float


def _free_minimizer(
    offsets: np.ndarray,
    free: np.ndarray,
    signs: np.ndarray,
    owner: np.ndarray,
    gamma: float,
    lam: float,
) -> np.ndarray:
    """Minimizer over the free split variables with the rest held at zero."""
    s = signs[free]
    m = free.size
    base = s / m
    if m == 1:
        return base

    rows = s[:, None] * offsets[owner[free]]
    basis = null_space(s[None, :])
    projected = rows.T @ basis
    ones = np.ones(m)
    root = np.sqrt(gamma)
    shift = (lam / (2.0 * gamma)) * (basis @ (basis.T @ ones))
    system = np.vstack([projected, root * basis])
    rhs = -np.concatenate([rows.T @ base, root * (base + shift)])
    step = lstsq(system, rhs)[0]
    return base + basis @ step


def solve_active_set(
    offsets: np.ndarray,
    gamma: float,
    lam: float,
    tolerance: float,
    max_iterations: int | None = None,
) -> ActiveSetOutcome:
    """Solve the split QP for neighbor offsets (N x q), starting from w = e_0."""
    count = offsets.shape[0]
    signs = np.concatenate([np.ones(count), -np.ones(count)])
    owner = np.concatenate([np.arange(count), np.arange(count)])
    partner = np.concatenate([np.arange(count, 2 * count), np.arange(count)])
    cap = max_iterations or 10 * (2 * count) ** 2
    curvature = gamma
    if curvature <= 0.0:
        curvature = RIDGE * (float(np.sum(offsets * offsets)) / count or 1.0)

    z = np.zeros(2 * count)
    z[0] = 1.0
    free = np.zeros(2 * count, dtype=bool)
    free[0] = True

    for iteration in range(1, cap + 1):
        free_idx = np.flatnonzero(free)
        target = _free_minimizer(offsets, free_idx, signs, owner, curvature, lam)
        step = target - z[free_idx]

        shrinking = step < 0
        if np.any(shrinking):
            ratios = -z[free_idx][shrinking] / step[shrinking]
            nearest = int(np.argmin(ratios))
            if ratios[nearest] < 1.0:
                z[free_idx] += ratios[nearest] * step
                blocking = free_idx[shrinking][nearest]
                z[blocking] = 0.0
                free[blocking] = False
                continue
        z[free_idx] = target

        w = z[:count] - z[count:]
        fit = offsets @ (offsets.T @ w)
        smooth = 2.0 * (curvature * w + fit)
        gradient = signs * smooth[owner] + lam
        multiplier = float(np.mean(signs[free_idx] * gradient[free_idx]))
        bound_multipliers = gradient - multiplier * signs

        scale = max(lam, float(np.max(np.abs(smooth))), 2.0 * float(np.sum(offsets * offsets)) * float(np.max(np.abs(w))))
        releasable = ~free & ~free[partner]
        candidates = np.flatnonzero(releasable)
        worst = None
        if candidates.size:
            worst = candidates[int(np.argmin(bound_multipliers[candidates]))]
        if worst is None or bound_multipliers[worst] >= -DUAL_SLACK * np.finfo(np.float64).eps * scale:
            exact = signs * (2.0 * (gamma * w + fit))[owner] + lam
            residual = exact[free_idx] - float(np.mean(signs[free_idx] * exact[free_idx])) * signs[free_idx]
            stationarity = float(np.max(np.abs(residual)))
            if stationarity > tolerance * max(1.0, scale):
                raise SolverDivergence(
                    f"active set converged with stationarity residual {stationarity:.3e} above {tolerance:.1e}"
                )
            return ActiveSetOutcome(weights=w, iterations=iteration, stationarity=stationarity)
        free[worst] = True

    raise SolverDivergence(f"active-set solver did not converge within {cap} iterations")
