"""Convex hull stratification over an embedded point cloud."""

from __future__ import annotations

import logging
from typing import List, Optional

import numpy as np

from core.errors import InputError, TooFewPoints
from core.serialization import parallel_map

from .models import ChsaParams, PointRecord, StratificationResult
from .solver import solve_active_set

logger = logging.getLogger(__name__)


def nearest_neighbors(points: np.ndarray, i: int, n_count: int) -> List[int]:
    """Indices of the ``n_count`` points closest to point ``i``, ties by ascending index."""
    p = points.shape[0]
    if n_count < 1:
        raise InputError(f"neighbor count must be positive, got {n_count}")
    if n_count >= p:
        raise TooFewPoints(f"{n_count} neighbors requested but only {p - 1} other points exist")
    offsets = points - points[i]
    squared = np.einsum("ij,ij->i", offsets, offsets)
    squared[i] = np.inf
    return np.argsort(squared, kind="stable")[:n_count].tolist()


def chsa_objective(w: np.ndarray, x: np.ndarray, neighbors: np.ndarray, params: ChsaParams) -> float:
    """gamma ||w||^2 + lambda ||w||_1 + ||x - sum_j w_j x_j||^2."""
    residual = x - neighbors.T @ w
    return float(params.gamma * (w @ w) + params.lambda_ * np.sum(np.abs(w)) + residual @ residual)


def solve_weights(x: np.ndarray, neighbors: np.ndarray, params: ChsaParams) -> np.ndarray:
    """Affine weights of ``x`` over the rows of ``neighbors`` (N x q) minimizing the CHSA objective."""
    x = np.asarray(x, dtype=np.float64)
    neighbors = np.atleast_2d(np.asarray(neighbors, dtype=np.float64))
    if neighbors.shape[0] < 1:
        raise InputError("at least one neighbor is required")
    outcome = solve_active_set(
        neighbors - x,
        gamma=params.gamma,
        lam=params.lambda_,
        tolerance=params.solver_tolerance,
    )
    return outcome.weights


def _stratify_point(points: np.ndarray, i: int, params: ChsaParams) -> PointRecord:
    neighbor_indices = nearest_neighbors(points, i, params.neighbors)
    neighbors = points[neighbor_indices]
    weights = solve_weights(points[i], neighbors, params)
    residual = float(np.linalg.norm((neighbors - points[i]).T @ weights))
    min_weight = float(weights.min())
    return PointRecord(
        index=i,
        neighbor_indices=neighbor_indices,
        weights=weights.tolist(),
        weight_norm=float(np.linalg.norm(weights)),
        min_weight=min_weight,
        is_flagged=min_weight < -params.negativity_threshold,
        residual=residual,
    )


def stratify(points: np.ndarray, params: ChsaParams, threads: int = 1) -> StratificationResult:
    """Solve every point against its neighbors and rank the flagged ones by weight norm."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InputError(f"points must be a p x q matrix, got shape {points.shape}")
    p = points.shape[0]
    if p <= params.neighbors:
        raise TooFewPoints(
            f"CHSA with {params.neighbors} neighbors needs more than {params.neighbors} points, got {p}"
        )

    logger.info("Stratifying point cloud", extra={"points": p, "dimension": points.shape[1], "neighbors": params.neighbors})
    records = parallel_map(lambda i: _stratify_point(points, i, params), range(p), threads=threads)

    flagged = [record for record in records if record.is_flagged]
    flagged.sort(key=lambda record: (-record.weight_norm, record.index))
    logger.info("Stratification finished", extra={"points": p, "flagged": len(flagged)})
    return StratificationResult(
        params=params,
        records=records,
        vertex_indices=[record.index for record in flagged],
    )


def top_vertices(
    result: StratificationResult,
    count: Optional[int] = None,
    threshold: Optional[float] = None,
) -> List[int]:
    """Flagged indices with the largest weight norms, by count or by norm threshold."""
    if (count is None) == (threshold is None):
        raise InputError("give exactly one of count or threshold")
    if count is not None:
        if count < 0:
            raise InputError(f"count must be nonnegative, got {count}")
        return result.vertex_indices[:count]
    norms = {record.index: record.weight_norm for record in result.records}
    return [index for index in result.vertex_indices if norms[index] >= threshold]
