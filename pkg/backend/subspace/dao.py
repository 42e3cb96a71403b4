"""File persistence for subspace sets and distance matrices.

Binary subspace set: int64 header (p, n, k), then p row-major n x k float64
matrices. CSV debug form: one basis per block, blocks separated by a blank
line. Distance matrices: CSV (p rows of p values) or binary (int64 p, then
p*p float64). Everything binary is little-endian.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from core.errors import MalformedArtifact
from core.serialization import FLOAT_FORMAT, read_model, sidecar_path, write_model

from .models import DistanceMatrix, Subspace, SubspaceSetMeta

HEADER_DTYPE = np.dtype("<i8")
VALUE_DTYPE = np.dtype("<f8")


def _is_csv(path: Path) -> bool:
    return path.suffix.lower() == ".csv"


def write_subspace_set(
    path: Path | str,
    points: Sequence[Subspace],
    meta: Optional[SubspaceSetMeta] = None,
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if _is_csv(path):
        with path.open("w", encoding="utf-8", newline="") as handle:
            for index, point in enumerate(points):
                if index:
                    handle.write("\n")
                pd.DataFrame(point.basis).to_csv(handle, header=False, index=False, float_format=FLOAT_FORMAT)
    else:
        p = len(points)
        n, k = (points[0].n, points[0].k) if p else (0, 0)
        with path.open("wb") as handle:
            handle.write(np.array([p, n, k], dtype=HEADER_DTYPE).tobytes())
            for point in points:
                handle.write(np.ascontiguousarray(point.basis, dtype=VALUE_DTYPE).tobytes())
    if meta is not None:
        write_model(sidecar_path(path), meta)


def read_subspace_set(path: Path | str) -> List[Subspace]:
    path = Path(path)
    if not path.exists():
        raise MalformedArtifact(f"missing subspace set {path}")
    if _is_csv(path):
        blocks = [block for block in path.read_text(encoding="utf-8").split("\n\n") if block.strip()]
        return [
            Subspace(pd.read_csv(io.StringIO(block), header=None, float_precision="round_trip").to_numpy(dtype=np.float64))
            for block in blocks
        ]

    raw = path.read_bytes()
    header_size = 3 * HEADER_DTYPE.itemsize
    if len(raw) < header_size:
        raise MalformedArtifact(f"{path} is too short for a subspace-set header")
    p, n, k = (int(value) for value in np.frombuffer(raw[:header_size], dtype=HEADER_DTYPE))
    expected = header_size + p * n * k * VALUE_DTYPE.itemsize
    if min(p, n, k) < 0 or len(raw) != expected:
        raise MalformedArtifact(f"{path} holds {len(raw)} bytes, header (p={p}, n={n}, k={k}) implies {expected}")
    values = np.frombuffer(raw[header_size:], dtype=VALUE_DTYPE).reshape(p, n, k)
    return [Subspace(values[i]) for i in range(p)]


def read_subspace_meta(path: Path | str) -> Optional[SubspaceSetMeta]:
    meta_path = sidecar_path(path)
    if not meta_path.exists():
        return None
    return read_model(meta_path, SubspaceSetMeta)


def write_distance_matrix(path: Path | str, matrix: DistanceMatrix) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if _is_csv(path):
        pd.DataFrame(matrix.entries).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
        return
    with path.open("wb") as handle:
        handle.write(np.array([matrix.p], dtype=HEADER_DTYPE).tobytes())
        handle.write(np.ascontiguousarray(matrix.entries, dtype=VALUE_DTYPE).tobytes())


def read_distance_matrix(path: Path | str, k: Optional[int] = None) -> DistanceMatrix:
    path = Path(path)
    if not path.exists():
        raise MalformedArtifact(f"missing distance matrix {path}")
    if _is_csv(path):
        entries = pd.read_csv(path, header=None, float_precision="round_trip").to_numpy(dtype=np.float64)
        return DistanceMatrix(entries, k=k)

    raw = path.read_bytes()
    header_size = HEADER_DTYPE.itemsize
    if len(raw) < header_size:
        raise MalformedArtifact(f"{path} is too short for a distance-matrix header")
    p = int(np.frombuffer(raw[:header_size], dtype=HEADER_DTYPE)[0])
    expected = header_size + p * p * VALUE_DTYPE.itemsize
    if p < 0 or len(raw) != expected:
        raise MalformedArtifact(f"{path} holds {len(raw)} bytes, header p={p} implies {expected}")
    return DistanceMatrix(np.frombuffer(raw[header_size:], dtype=VALUE_DTYPE).reshape(p, p), k=k)
