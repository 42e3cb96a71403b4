from __future__ import annotations

from dataclasses import dataclass
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel

AUTO = "auto"
Dimension = Union[int, Literal["auto"]]


@dataclass(frozen=True)
class Embedding:
    """Classical MDS coordinates plus the spectrum they came from.

    ``requested_q`` is what the caller asked for; ``q`` may be smaller when
    fewer eigenvalues are positive.
    """

    coordinates: np.ndarray
    eigenvalues: np.ndarray
    negative_mass: float
    requested_q: Dimension = AUTO

    @property
    def p(self) -> int:
        return self.coordinates.shape[0]

    @property
    def q(self) -> int:
        return self.coordinates.shape[1]

    @property
    def reduced(self) -> bool:
        return self.requested_q != AUTO and self.q < int(self.requested_q)


class EmbeddingMeta(BaseModel):
    """JSON sidecar written next to the embedding CSV."""

    p: int
    q: int
    requested_q: Dimension
    negative_mass: float
    eigenvalues: List[float]
    run: Optional[dict] = None
