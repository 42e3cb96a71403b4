"""Build Grassmann point sets and run distance matrix -> MDS -> CHSA end to end."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import numpy as np

from chsa.models import ChsaParams
from chsa.service import stratify
from core.errors import (
    AllZeroInput,
    ClassTooSmall,
    InputError,
    PatchLargerThanImage,
    RankExceedsAmbient,
    SizeMismatch,
    TooFewPoints,
)
from flagmean.service import WeightMethod, random_convex_sample
from mds.models import AUTO, Dimension, Embedding
from mds.service import embed
from subspace.models import DistanceMatrix, Origin, Subspace
from subspace.service import DEFAULT_RANK_TOLERANCE, check_homogeneous, distance_matrix, orthonormalize, random_subspace

from .models import ClassDistanceSummary, ClassSampleSet, ExtractionReport, HyperspectralCube, PatchSet

logger = logging.getLogger(__name__)


def extract_patches(
    cube: HyperspectralCube,
    patch_size: int = 3,
    stride: Optional[int] = None,
    rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
) -> PatchSet:
    """One point on Gr(s*s, bands) per s x s window on the stride grid.

    Windows whose spectra have numerical rank below s*s are excluded and
    reported, so every returned point has the same dimension.
    """
    stride = patch_size if stride is None else stride
    if patch_size < 1 or stride < 1:
        raise InputError(f"patch size and stride must be positive, got {patch_size} and {stride}")
    dimension = patch_size * patch_size
    if dimension > cube.bands:
        raise RankExceedsAmbient(f"{patch_size}x{patch_size} patches span up to {dimension} dimensions, cube has {cube.bands} bands")
    if patch_size > cube.rows or patch_size > cube.cols:
        raise PatchLargerThanImage(f"patch size {patch_size} exceeds image {cube.rows}x{cube.cols}")

    row_starts = range(0, cube.rows - patch_size + 1, stride)
    col_starts = range(0, cube.cols - patch_size + 1, stride)
    points: List[Subspace] = []
    origins = []
    excluded = []
    for row in row_starts:
        for col in col_starts:
            window = cube.values[row:row + patch_size, col:col + patch_size, :]
            spectra = window.reshape(dimension, cube.bands).T
            try:
                point = orthonormalize(spectra, rank_tolerance)
            except AllZeroInput:
                excluded.append((row, col))
                continue
            if point.k < dimension:
                excluded.append((row, col))
                continue
            points.append(point)
            origins.append((row, col))

    if excluded:
        logger.warning("Excluded %d rank-deficient patches out of %d", len(excluded), len(excluded) + len(points))
    logger.info("Extracted patches", extra={"points": len(points), "patch_size": patch_size, "stride": stride})
    return PatchSet(
        points=points,
        origins=origins,
        patch_size=patch_size,
        stride=stride,
        excluded=excluded,
        unused_rows=cube.rows - (row_starts[-1] + patch_size),
        unused_cols=cube.cols - (col_starts[-1] + patch_size),
    )


def sample_classes(
    cube: HyperspectralCube,
    class_map: np.ndarray,
    draw_size: int,
    draws_per_class: int,
    seed: int,
    rank_tolerance: float = DEFAULT_RANK_TOLERANCE,
) -> ClassSampleSet:
    """Span random same-class pixel draws into labelled points on Gr(draw_size, bands).

    Label 0 means unlabelled and is skipped. Each class draws from its own
    child of ``SeedSequence(seed)``.
    """
    class_map = np.asarray(class_map)
    if class_map.shape != (cube.rows, cube.cols):
        raise SizeMismatch(f"class map shape {class_map.shape} does not match cube {cube.rows}x{cube.cols}")
    if draw_size < 1 or draws_per_class < 1:
        raise InputError(f"draw size and draws per class must be positive, got {draw_size} and {draws_per_class}")
    if draw_size > cube.bands:
        raise RankExceedsAmbient(f"draws of {draw_size} pixels cannot span {draw_size} dimensions in {cube.bands} bands")

    flat_labels = class_map.ravel()
    labels = [int(label) for label in np.unique(flat_labels) if label != 0]
    members = {label: np.flatnonzero(flat_labels == label) for label in labels}
    for label in labels:
        if members[label].size < draw_size:
            raise ClassTooSmall(label, int(members[label].size), draw_size)

    spectra = cube.values.reshape(-1, cube.bands)
    streams = np.random.SeedSequence(seed).spawn(len(labels))
    points: List[Subspace] = []
    point_labels: List[int] = []
    pixels = []
    excluded = 0
    for label, stream in zip(labels, streams):
        rng = np.random.default_rng(stream)
        for _ in range(draws_per_class):
            chosen = np.sort(rng.choice(members[label], size=draw_size, replace=False))
            try:
                point = orthonormalize(spectra[chosen].T, rank_tolerance)
            except AllZeroInput:
                excluded += 1
                continue
            if point.k < draw_size:
                excluded += 1
                continue
            points.append(point)
            point_labels.append(label)
            pixels.append([(int(index // cube.cols), int(index % cube.cols)) for index in chosen])

    if excluded:
        logger.warning("Excluded %d rank-deficient class draws", excluded)
    logger.info("Sampled classes", extra={"classes": len(labels), "points": len(points), "draw_size": draw_size})
    return ClassSampleSet(points=points, labels=point_labels, draw_size=draw_size, pixels=pixels, excluded=excluded)


def simplex_dataset(
    generators: int,
    ambient: int,
    dim: int,
    count: int,
    seed: int,
    method: WeightMethod = "uniform",
    threads: int = 1,
) -> List[Subspace]:
    """Random generators on Gr(dim, ambient) followed by ``count`` weighted flag means of them.

    The generators come first, so indices 0..generators-1 are the true vertices.
    """
    if generators < 1 or not 1 <= dim <= ambient:
        raise InputError(f"need generators >= 1 and 1 <= dim <= ambient, got {generators}, {dim}, {ambient}")
    generator_stream, sample_stream = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(generator_stream)
    vertices = [random_subspace(ambient, dim, rng) for _ in range(generators)]
    samples = random_convex_sample(vertices, count, sample_stream, method=method, threads=threads)
    return vertices + samples


def synthetic_cube(
    rows: int,
    cols: int,
    bands: int,
    endmembers: int = 4,
    noise: float = 0.01,
    seed: int = 0,
) -> np.ndarray:
    """Linear mixtures of random positive spectra plus Gaussian noise, shaped (rows, cols, bands)."""
    rng = np.random.default_rng(seed)
    spectra = rng.uniform(0.1, 1.0, size=(endmembers, bands))
    abundances = rng.dirichlet(np.ones(endmembers), size=rows * cols)
    values = abundances @ spectra + noise * rng.standard_normal((rows * cols, bands))
    return values.reshape(rows, cols, bands)


def extract_endmembers(
    points: Sequence[Subspace],
    chsa_params: ChsaParams,
    mds_dim: Dimension = AUTO,
    origins: Optional[Sequence[Origin]] = None,
    threads: int = 1,
) -> ExtractionReport:
    """Chordal distance matrix, MDS embedding, CHSA, then map vertex indices back to origins."""
    p = len(points)
    if p <= chsa_params.neighbors:
        raise TooFewPoints(
            f"{p} points cannot support {chsa_params.neighbors} neighbors; need at least {chsa_params.neighbors + 1}"
        )
    n, k = check_homogeneous(points)
    origins = list(range(p)) if origins is None else list(origins)
    if len(origins) != p:
        raise SizeMismatch(f"{len(origins)} origins for {p} points")

    logger.info("Starting endmember extraction", extra={"points": p, "n": n, "k": k, "mds_dim": mds_dim})
    distances = distance_matrix(points, threads=threads)
    embedding = embed(distances, mds_dim)
    stratification = stratify(embedding.coordinates, chsa_params, threads=threads)
    vertex_origins = [origins[index] for index in stratification.vertex_indices]
    logger.info("Endmember extraction finished", extra={"vertices": len(vertex_origins)})
    return ExtractionReport(
        distances=distances,
        embedding=embedding,
        stratification=stratification,
        origins=origins,
        vertex_origins=vertex_origins,
        n=n,
        k=k,
    )


def embed_class_samples(samples: ClassSampleSet, mds_dim: Dimension = AUTO, threads: int = 1) -> Embedding:
    """MDS embedding of labelled class draws; row i carries ``samples.labels[i]``."""
    return embed(distance_matrix(samples.points, threads=threads), mds_dim)


def class_distance_summary(distances: DistanceMatrix, labels: Sequence[int]) -> ClassDistanceSummary:
    """Mean chordal distance over same-class pairs and over cross-class pairs."""
    labels = np.asarray(labels)
    if labels.size != distances.p:
        raise SizeMismatch(f"{labels.size} labels for {distances.p} points")
    upper = np.triu(np.ones((distances.p, distances.p), dtype=bool), k=1)
    same = labels[:, None] == labels[None, :]
    within = distances.entries[upper & same]
    across = distances.entries[upper & ~same]
    if within.size == 0 or across.size == 0:
        raise InputError("need at least two classes with two points each")
    return ClassDistanceSummary(within=float(within.mean()), across=float(across.mean()))
