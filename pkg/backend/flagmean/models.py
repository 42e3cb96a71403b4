from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class FlagMean:
    """Ordered orthonormal directions u_1..u_l of a weighted flag mean.

    ``ties`` lists positions i where singular values i and i+1 agree to
    within the tie tolerance; the flag component of dimension i+1 is not
    well defined there.
    """

    directions: np.ndarray
    singular_values: np.ndarray
    ties: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def l(self) -> int:  # noqa: E743
        return self.directions.shape[1]

    @property
    def n(self) -> int:
        return self.directions.shape[0]
