from __future__ import annotations

import numpy as np


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry of each one is positive.

    Singular and eigen vectors are defined only up to sign; fixing the sign
    this way makes repeated runs produce identical output.
    """
    if vectors.size == 0:
        return vectors.copy()
    # argmax picks the first index on ties, which keeps the rule deterministic
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs
