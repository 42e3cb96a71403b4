"""Principal angles and chordal distances between points on Gr(k, n)."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy.linalg import svd, svdvals

from core.errors import (
    AllZeroInput,
    AmbientMismatch,
    DimensionMismatch,
    HeterogeneousSet,
    InputError,
    TooFewPoints,
)
from core.linalg import canonical_signs
from core.serialization import parallel_map

from .models import DistanceMatrix, Subspace

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOLERANCE = 1e-8
# radicands below this (times k) are roundoff from k - ||A^T B||^2 and read as 0
RADICAND_FLOOR = 64 * np.finfo(np.float64).eps


def orthonormalize(vectors: np.ndarray, rank_tolerance: float = DEFAULT_RANK_TOLERANCE) -> Subspace:
    """Return an orthonormal basis for the column space of ``vectors``.

    The dimension of the result is the numerical rank: the number of singular
    values above ``rank_tolerance`` times the largest one.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or min(vectors.shape) < 1:
        raise InputError(f"expected a non-empty n x m matrix, got shape {vectors.shape}")
    if not rank_tolerance > 0:
        raise InputError(f"rank_tolerance must be positive, got {rank_tolerance}")
    if not np.all(np.isfinite(vectors)):
        raise InputError("input vectors contain non-finite values")

    left, singular_values, _ = svd(vectors, full_matrices=False)
    if singular_values[0] <= np.finfo(np.float64).eps:
        raise AllZeroInput(f"all {vectors.shape[1]} input columns are numerically zero")

    rank = int(np.count_nonzero(singular_values > rank_tolerance * singular_values[0]))
    return Subspace(canonical_signs(left[:, :rank]))


def random_subspace(n: int, k: int, rng: np.random.Generator) -> Subspace:
    """Draw a point on Gr(k, n) from Gaussian columns."""
    return orthonormalize(rng.standard_normal((n, k)))


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles between ``a`` and ``b``, ascending, in [0, pi/2]."""
    if a.n != b.n:
        raise AmbientMismatch(f"ambient dimensions differ: {a.n} vs {b.n}")
    cosines = np.clip(svdvals(a.basis.T @ b.basis), 0.0, 1.0)
    return np.sort(np.arccos(cosines))


def chordal_distance(a: Subspace, b: Subspace) -> float:
    """sqrt(k - ||A^T B||_F^2), equal to sqrt(sum sin^2 of the principal angles)."""
    if a.n != b.n:
        raise AmbientMismatch(f"ambient dimensions differ: {a.n} vs {b.n}")
    if a.k != b.k:
        raise DimensionMismatch(f"subspace dimensions differ: {a.k} vs {b.k}")
    overlap = a.basis.T @ b.basis
    radicand = a.k - float(np.sum(overlap * overlap))
    if radicand < RADICAND_FLOOR * a.k:
        return 0.0
    return float(np.sqrt(min(radicand, float(a.k))))


def projection_embedding(point: Subspace) -> np.ndarray:
    """Map a subspace to P / sqrt(2), P its orthogonal projector.

    Frobenius distances between images equal chordal distances, which is the
    isometric embedding classical MDS recovers.
    """
    return (point.basis @ point.basis.T) / np.sqrt(2.0)


def check_homogeneous(points: Sequence[Subspace]) -> tuple[int, int]:
    n, k = points[0].n, points[0].k
    for index, point in enumerate(points):
        if point.n != n or point.k != k:
            raise HeterogeneousSet(
                f"point {index} lies on Gr({point.k},{point.n}), expected Gr({k},{n})"
            )
    return n, k


def distance_matrix(points: Sequence[Subspace], threads: int = 1) -> DistanceMatrix:
    """Pairwise chordal distances, each unordered pair computed once.

    Row ``i`` holds the distances from point ``i`` to every later point; rows
    are independent, so the result does not depend on ``threads``.
    """
    if len(points) < 2:
        raise TooFewPoints(f"a distance matrix needs at least 2 points, got {len(points)}")
    n, k = check_homogeneous(points)
    p = len(points)

    stacked = np.stack([point.basis for point in points])
    flat = stacked.transpose(1, 0, 2).reshape(n, p * k)

    def upper_row(i: int) -> np.ndarray:
        later = p - i - 1
        overlaps = points[i].basis.T @ flat[:, (i + 1) * k:]
        squared = np.square(overlaps.reshape(k, later, k)).sum(axis=(0, 2))
        radicand = np.clip(k - squared, 0.0, float(k))
        radicand[radicand < RADICAND_FLOOR * k] = 0.0
        return np.sqrt(radicand)

    logger.info("Computing chordal distances", extra={"points": p, "n": n, "k": k})
    rows = parallel_map(upper_row, range(p - 1), threads=threads)

    upper = np.zeros((p, p))
    for i, row in enumerate(rows):
        upper[i, i + 1:] = row
    return DistanceMatrix(upper + upper.T, k=k)
