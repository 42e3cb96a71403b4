from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from chsa.models import StratificationResult
from core.errors import NonFiniteCube, SizeMismatch
from mds.models import Dimension, Embedding
from subspace.models import DistanceMatrix, Origin, Subspace

Interleave = Literal["BSQ", "BIL", "BIP"]
CubeDtype = Literal["float32", "float64", "int16"]

SUPPORTED_DTYPES = ("float32", "float64", "int16")


class CubeHeader(BaseModel):
    """JSON header describing a raw binary cube payload."""

    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    bands: int = Field(gt=0)
    interleave: Interleave
    dtype: CubeDtype
    payload: str
    band_mask: Optional[List[int]] = None
    byte_order: Literal["little", "big"] = "little"
    wavelengths: Optional[List[float]] = None


@dataclass(frozen=True)
class HyperspectralCube:
    """rows x cols x bands radiance values (float64), after any band masking."""

    values: np.ndarray
    band_mask: Optional[Tuple[int, ...]] = None
    wavelengths: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.values.ndim != 3 or min(self.values.shape) < 1:
            raise SizeMismatch(f"cube values must be rows x cols x bands, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteCube("cube contains non-finite values")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def bands(self) -> int:
        return self.values.shape[2]


@dataclass
class PatchSet:
    """Subspaces spanned by s x s pixel patches, with their top-left origins.

    ``excluded`` holds origins of rank-deficient patches; ``unused_rows`` and
    ``unused_cols`` count edge pixels the stride grid never covers.
    """

    points: List[Subspace]
    origins: List[Tuple[int, int]]
    patch_size: int
    stride: int
    excluded: List[Tuple[int, int]] = field(default_factory=list)
    unused_rows: int = 0
    unused_cols: int = 0

    def __post_init__(self) -> None:
        if len(self.points) != len(self.origins):
            raise SizeMismatch(f"{len(self.points)} patch points but {len(self.origins)} origins")


@dataclass
class ClassSampleSet:
    points: List[Subspace]
    labels: List[int]
    draw_size: int
    pixels: List[List[Tuple[int, int]]] = field(default_factory=list)
    excluded: int = 0

    def __post_init__(self) -> None:
        if len(self.points) != len(self.labels):
            raise SizeMismatch(f"{len(self.points)} class samples but {len(self.labels)} labels")


@dataclass
class ExtractionReport:
    distances: DistanceMatrix
    embedding: Embedding
    stratification: StratificationResult
    origins: List[Origin]
    vertex_origins: List[Origin]
    n: int
    k: int

    def __post_init__(self) -> None:
        if len(self.vertex_origins) != len(self.stratification.vertex_indices):
            raise SizeMismatch("vertex origins are not aligned with vertex indices")


@dataclass(frozen=True)
class ClassDistanceSummary:
    within: float
    across: float


class EmbeddingSection(BaseModel):
    q: int
    requested_q: Dimension
    negative_mass: float
    eigenvalues: List[float]
    coordinates: List[List[float]]


class ExtractionReportDocument(BaseModel):
    version: str
    run: Dict[str, Any] = Field(default_factory=dict)
    p: int
    n: int
    k: int
    embedding: EmbeddingSection
    stratification: StratificationResult
    origins: List[Origin]
    vertex_origins: List[Origin]
