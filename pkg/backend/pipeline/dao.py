"""Cube, class-map, report and plot-data files."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import ValidationError

from core import VERSION
from core.errors import MalformedArtifact, MalformedHeader, PayloadSizeMismatch, UnsupportedDtype
from core.serialization import FLOAT_FORMAT, read_model, write_model

from .models import (
    SUPPORTED_DTYPES,
    CubeHeader,
    EmbeddingSection,
    ExtractionReport,
    ExtractionReportDocument,
    HyperspectralCube,
    Interleave,
)

logger = logging.getLogger(__name__)

# axis order of the payload for each interleave, as (rows, cols, bands) positions
_LAYOUTS = {
    "BSQ": ("bands", "rows", "cols"),
    "BIL": ("rows", "bands", "cols"),
    "BIP": ("rows", "cols", "bands"),
}


def _payload_dtype(header: CubeHeader) -> np.dtype:
    dtype = np.dtype(header.dtype)
    return dtype.newbyteorder("<" if header.byte_order == "little" else ">")


def load_cube(header_path: Path | str) -> HyperspectralCube:
    """Read a JSON header and its raw payload into a (rows, cols, bands) float64 cube."""
    header_path = Path(header_path)
    try:
        raw = json.loads(header_path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise MalformedHeader(f"missing cube header {header_path}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedHeader(f"{header_path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedHeader(f"{header_path} must hold a JSON object")
    if raw.get("dtype") not in SUPPORTED_DTYPES:
        raise UnsupportedDtype(f"dtype {raw.get('dtype')!r} is not one of {', '.join(SUPPORTED_DTYPES)}")
    try:
        header = CubeHeader.model_validate(raw)
    except ValidationError as exc:
        raise MalformedHeader(f"{header_path}: {exc}") from exc

    if header.band_mask is not None:
        if not header.band_mask:
            raise MalformedHeader("band_mask must keep at least one band")
        if len(set(header.band_mask)) != len(header.band_mask) or any(
            not 0 <= band < header.bands for band in header.band_mask
        ):
            raise MalformedHeader(f"band_mask must list distinct band indices in [0, {header.bands})")
    if header.wavelengths is not None and len(header.wavelengths) != header.bands:
        raise MalformedHeader(f"{len(header.wavelengths)} wavelengths for {header.bands} bands")

    payload_path = header_path.parent / header.payload
    if not payload_path.exists():
        raise MalformedHeader(f"payload {payload_path} does not exist")
    dtype = _payload_dtype(header)
    expected = header.rows * header.cols * header.bands * dtype.itemsize
    actual = payload_path.stat().st_size
    if actual != expected:
        raise PayloadSizeMismatch(f"payload holds {actual} bytes, header implies {expected}")

    flat = np.fromfile(payload_path, dtype=dtype)
    sizes = {"rows": header.rows, "cols": header.cols, "bands": header.bands}
    layout = _LAYOUTS[header.interleave]
    stored = flat.reshape([sizes[axis] for axis in layout])
    values = np.transpose(stored, [layout.index(axis) for axis in ("rows", "cols", "bands")]).astype(np.float64)

    wavelengths = header.wavelengths
    if header.band_mask is not None:
        values = values[:, :, header.band_mask]
        if wavelengths is not None:
            wavelengths = [wavelengths[band] for band in header.band_mask]

    logger.info(
        "Loaded cube",
        extra={"header": str(header_path), "shape": values.shape, "interleave": header.interleave},
    )
    return HyperspectralCube(
        values=np.ascontiguousarray(values),
        band_mask=tuple(header.band_mask) if header.band_mask is not None else None,
        wavelengths=tuple(wavelengths) if wavelengths is not None else None,
    )


def write_cube(
    header_path: Path | str,
    values: np.ndarray,
    interleave: Interleave = "BSQ",
    dtype: str = "float64",
    band_mask: Optional[List[int]] = None,
    payload: Optional[str] = None,
) -> CubeHeader:
    """Write ``values`` (rows, cols, bands) as a raw payload plus JSON header."""
    header_path = Path(header_path)
    header_path.parent.mkdir(parents=True, exist_ok=True)
    rows, cols, bands = values.shape
    header = CubeHeader(
        rows=rows,
        cols=cols,
        bands=bands,
        interleave=interleave,
        dtype=dtype,
        payload=payload or header_path.with_suffix(".raw").name,
        band_mask=band_mask,
    )
    layout = _LAYOUTS[interleave]
    stored = np.transpose(values, [("rows", "cols", "bands").index(axis) for axis in layout])
    np.ascontiguousarray(stored, dtype=_payload_dtype(header)).tofile(header_path.parent / header.payload)
    write_model(header_path, header)
    return header


def read_class_map(path: Path | str) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise MalformedArtifact(f"missing class map {path}")
    try:
        return pd.read_csv(path, header=None).to_numpy(dtype=np.int64)
    except (ValueError, pd.errors.ParserError) as exc:
        raise MalformedArtifact(f"{path} is not a CSV of integer labels: {exc}") from exc


def write_class_map(path: Path | str, class_map: np.ndarray) -> None:
    pd.DataFrame(np.asarray(class_map, dtype=np.int64)).to_csv(path, header=False, index=False)


def report_document(report: ExtractionReport, run: Optional[Dict[str, Any]] = None) -> ExtractionReportDocument:
    embedding = report.embedding
    return ExtractionReportDocument(
        version=VERSION,
        run=run or {},
        p=embedding.p,
        n=report.n,
        k=report.k,
        embedding=EmbeddingSection(
            q=embedding.q,
            requested_q=embedding.requested_q,
            negative_mass=embedding.negative_mass,
            eigenvalues=embedding.eigenvalues.tolist(),
            coordinates=embedding.coordinates.tolist(),
        ),
        stratification=report.stratification,
        origins=report.origins,
        vertex_origins=report.vertex_origins,
    )


def write_report(path: Path | str, document: ExtractionReportDocument) -> None:
    write_model(path, document)


def read_report(path: Path | str) -> ExtractionReportDocument:
    return read_model(path, ExtractionReportDocument)


def plot_frame(document: ExtractionReportDocument) -> pd.DataFrame:
    """First three embedding coordinates per point, zero-padded, with norm and flag columns."""
    coordinates = np.zeros((document.p, 3))
    available = np.asarray(document.embedding.coordinates, dtype=np.float64).reshape(document.p, -1)[:, :3]
    coordinates[:, : available.shape[1]] = available
    records = sorted(document.stratification.records, key=lambda record: record.index)
    return pd.DataFrame(
        {
            "index": np.arange(document.p),
            "x": coordinates[:, 0],
            "y": coordinates[:, 1],
            "z": coordinates[:, 2],
            "weight_norm": [record.weight_norm for record in records],
            "flagged": [int(record.is_flagged) for record in records],
        }
    )


def write_plot_data(path: Path | str, document: ExtractionReportDocument) -> pd.DataFrame:
    frame = plot_frame(document)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return frame
