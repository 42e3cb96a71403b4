from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from core.errors import NotOrthonormal, SizeMismatch

ORTHONORMAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class Subspace:
    """A point on Gr(k, n), stored as an n x k orthonormal basis."""

    basis: np.ndarray

    def __post_init__(self) -> None:
        basis = np.array(self.basis, dtype=np.float64, order="C")
        if basis.ndim != 2 or basis.shape[1] < 1 or basis.shape[0] < basis.shape[1]:
            raise NotOrthonormal(f"basis must be n x k with 1 <= k <= n, got shape {basis.shape}")
        gram = basis.T @ basis
        deviation = np.max(np.abs(gram - np.eye(basis.shape[1])))
        if not deviation <= ORTHONORMAL_TOLERANCE:
            raise NotOrthonormal(f"basis columns deviate from orthonormal by {deviation:.3e}")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of pairwise chordal distances.

    ``k`` is the subspace dimension when known; it bounds entries by sqrt(k).
    Matrices read back from disk may not carry it.
    """

    entries: np.ndarray
    k: Optional[int] = None

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=np.float64, order="C")
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise SizeMismatch(f"distance matrix must be square, got shape {entries.shape}")
        if not np.array_equal(entries, entries.T):
            raise SizeMismatch("distance matrix is not symmetric")
        if np.any(np.diag(entries) != 0.0):
            raise SizeMismatch("distance matrix diagonal is not zero")
        if np.any(entries < 0.0) or not np.all(np.isfinite(entries)):
            raise SizeMismatch("distance matrix entries must be finite and nonnegative")
        if self.k is not None and np.any(entries > np.sqrt(self.k)):
            raise SizeMismatch(f"distance matrix entries exceed sqrt(k) for k={self.k}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def p(self) -> int:
        return self.entries.shape[0]


Origin = Union[Tuple[int, int], int]


class SubspaceSetMeta(BaseModel):
    """Sidecar document stored next to a subspace-set file."""

    p: int
    n: int
    k: int
    origins: Optional[List[Origin]] = None
    labels: Optional[List[int]] = None
    excluded: List[Tuple[int, int]] = Field(default_factory=list)
    run: Dict[str, Any] = Field(default_factory=dict)
