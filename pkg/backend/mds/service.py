"""Classical multidimensional scaling."""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import pdist, squareform

from core.errors import InputError, NoPositiveEigenvalues, SizeMismatch, TooFewPoints
from core.linalg import canonical_signs
from subspace.models import DistanceMatrix

from .models import AUTO, Dimension, Embedding

logger = logging.getLogger(__name__)

# eigenvalues at or below this fraction of the largest one count as zero
POSITIVE_RELATIVE_TOLERANCE = 1e-9


def double_center(d: DistanceMatrix) -> np.ndarray:
    """B = H A H with A = -D**2 / 2 and H = I - 11^T / p.

    Computed by subtracting row and column means, then symmetrized so B is
    exactly symmetric.
    """
    a = -0.5 * np.square(d.entries)
    b = a - a.mean(axis=0, keepdims=True) - a.mean(axis=1, keepdims=True) + a.mean()
    return 0.5 * (b + b.T)


def embed(d: DistanceMatrix, q: Dimension = AUTO) -> Embedding:
    """Embed ``d`` in R^q from the top positive eigenpairs of the double-centered matrix."""
    p = d.p
    if p < 2:
        raise TooFewPoints(f"MDS needs at least 2 points, got {p}")
    if q != AUTO and not (isinstance(q, int) and 1 <= q <= p):
        raise InputError(f"embedding dimension must be 'auto' or an integer in [1, {p}], got {q!r}")

    b = double_center(d)
    eigenvalues, eigenvectors = eigh(b)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    largest = eigenvalues[0]
    if largest <= p * np.finfo(np.float64).eps * np.abs(b).max():
        raise NoPositiveEigenvalues(f"double-centered matrix has no positive eigenvalue (largest {largest:.3e})")

    positive = int(np.count_nonzero(eigenvalues > POSITIVE_RELATIVE_TOLERANCE * largest))
    used = positive if q == AUTO else min(int(q), positive)
    if q != AUTO and used < q:
        logger.warning("Requested %d MDS dimensions but only %d eigenvalues are positive; using %d", q, positive, used)

    total = float(np.sum(np.abs(eigenvalues)))
    negative_mass = float(np.sum(np.abs(eigenvalues[eigenvalues < 0])) / total)
    if negative_mass > 1e-8:
        logger.warning("Distance matrix is not Euclidean: negative eigenvalue mass %.3e discarded", negative_mass)

    coordinates = np.ascontiguousarray(canonical_signs(eigenvectors[:, :used]) * np.sqrt(eigenvalues[:used]))
    logger.info("MDS embedding computed", extra={"points": p, "q": used, "negative_mass": negative_mass})
    return Embedding(
        coordinates=coordinates,
        eigenvalues=eigenvalues,
        negative_mass=negative_mass,
        requested_q=q,
    )


def reconstruction_error(e: Embedding, d: DistanceMatrix) -> float:
    """Largest absolute gap between embedded and original pairwise distances."""
    if e.p != d.p:
        raise SizeMismatch(f"embedding has {e.p} points, distance matrix has {d.p}")
    embedded = pdist(e.coordinates)
    original = squareform(d.entries, checks=False)
    return float(np.max(np.abs(embedded - original)))
