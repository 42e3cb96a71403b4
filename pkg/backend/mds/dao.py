"""Embedding persistence: coordinates CSV plus a JSON sidecar."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from core.errors import MalformedArtifact
from core.serialization import FLOAT_FORMAT, read_model, sidecar_path, write_model

from .models import Embedding, EmbeddingMeta


def write_embedding(path: Path | str, embedding: Embedding, run: Optional[dict] = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(embedding.coordinates).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    meta = EmbeddingMeta(
        p=embedding.p,
        q=embedding.q,
        requested_q=embedding.requested_q,
        negative_mass=embedding.negative_mass,
        eigenvalues=embedding.eigenvalues.tolist(),
        run=run,
    )
    write_model(sidecar_path(path), meta)


def read_embedding(path: Path | str) -> Embedding:
    path = Path(path)
    if not path.exists():
        raise MalformedArtifact(f"missing embedding {path}")
    meta = read_model(sidecar_path(path), EmbeddingMeta)
    coordinates = np.ascontiguousarray(
        pd.read_csv(path, header=None, float_precision="round_trip").to_numpy(dtype=np.float64)
    )
    if coordinates.shape != (meta.p, meta.q):
        raise MalformedArtifact(
            f"{path} holds a {coordinates.shape} table, sidecar declares ({meta.p}, {meta.q})"
        )
    return Embedding(
        coordinates=coordinates,
        eigenvalues=np.asarray(meta.eigenvalues, dtype=np.float64),
        negative_mass=meta.negative_mass,
        requested_q=meta.requested_q,
    )
