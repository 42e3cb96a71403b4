"""SVD-based weighted flag mean and the convex-combination sampler built on it."""

from __future__ import annotations

import logging
from typing import List, Literal, Sequence, Union

import numpy as np
from scipy.linalg import svd

from core.errors import AmbientMismatch, ComponentTooLarge, InputError, NonpositiveWeight, WeightMismatch
from core.linalg import canonical_signs
from core.serialization import parallel_map
from subspace.models import Subspace
from subspace.service import check_homogeneous

from .models import FlagMean

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
TIE_TOLERANCE = 1e-10

SeedLike = Union[int, np.random.SeedSequence]
WeightMethod = Literal["uniform", "dirichlet"]


def weighted_flag_mean(inputs: Sequence[Subspace], weights: Sequence[float]) -> FlagMean:
    """Left singular vectors of [sqrt(a_1) Y_1 | ... | sqrt(a_r) Y_r], cut at numerical rank."""
    if not inputs:
        raise InputError("flag mean needs at least one input subspace")
    if len(weights) != len(inputs):
        raise WeightMismatch(f"{len(weights)} weights for {len(inputs)} inputs")
    weights = np.asarray(weights, dtype=np.float64)
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise NonpositiveWeight(f"weights must be finite and positive, got {weights.tolist()}")
    n = inputs[0].n
    for index, point in enumerate(inputs):
        if point.n != n:
            raise AmbientMismatch(f"input {index} lives in R^{point.n}, expected R^{n}")

    stacked = np.hstack([np.sqrt(weight) * point.basis for weight, point in zip(weights, inputs)])
    left, singular_values, _ = svd(stacked, full_matrices=False)
    rank = int(np.count_nonzero(singular_values > RANK_TOLERANCE * singular_values[0]))
    singular_values = singular_values[:rank]

    gaps = singular_values[:-1] - singular_values[1:]
    ties = tuple(int(i) for i in np.flatnonzero(gaps <= TIE_TOLERANCE * singular_values[:-1]))
    if ties:
        logger.warning("Flag mean has tied singular values; flag components at %s are not unique", [i + 1 for i in ties])

    return FlagMean(
        directions=canonical_signs(left[:, :rank]),
        singular_values=singular_values,
        ties=ties,
    )


def flag_component(mean: FlagMean, k: int) -> Subspace:
    """The k-dimensional member V_k = span(u_1..u_k) of the flag."""
    if k < 1:
        raise InputError(f"flag component dimension must be positive, got {k}")
    if k > mean.l:
        raise ComponentTooLarge(f"requested component {k} exceeds flag length {mean.l}")
    return Subspace(mean.directions[:, :k])


def simplex_weights(count: int, rng: np.random.Generator, method: WeightMethod = "uniform") -> np.ndarray:
    """Random point in the open probability simplex.

    ``uniform`` normalizes i.i.d. uniform(0, 1] variates; ``dirichlet`` draws
    Dirichlet(1, ..., 1), which is uniform on the simplex.
    """
    if method == "uniform":
        raw = 1.0 - rng.random(count)
        return raw / raw.sum()
    if method == "dirichlet":
        return rng.dirichlet(np.ones(count))
    raise InputError(f"unknown weight method {method!r}")


def _seed_root(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        # fresh copy: spawn() advances the counter of the object it is called on
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key)
    return np.random.SeedSequence(seed)


def random_convex_sample(
    generators: Sequence[Subspace],
    count: int,
    seed: SeedLike,
    method: WeightMethod = "uniform",
    threads: int = 1,
) -> List[Subspace]:
    """k-dimensional flag components of randomly weighted flag means of ``generators``.

    Sample ``i`` draws its weights from its own child of ``SeedSequence(seed)``,
    so the output is the same for any ``threads``.
    """
    if count < 0:
        raise InputError(f"sample count must be nonnegative, got {count}")
    if not generators:
        raise InputError("at least one generator is required")
    _, k = check_homogeneous(generators)
    if count == 0:
        return []

    streams = _seed_root(seed).spawn(count)

    def draw(stream: np.random.SeedSequence) -> Subspace:
        weights = simplex_weights(len(generators), np.random.default_rng(stream), method)
        return flag_component(weighted_flag_mean(generators, weights), k)

    logger.info(
        "Sampling weighted flag means",
        extra={"generators": len(generators), "count": count, "method": method},
    )
    return parallel_map(draw, streams, threads=threads)
