from __future__ import annotations

from typing import Dict, Optional

from pydantic import BaseModel, Field

from chsa.models import ChsaParams
from mds.models import Dimension


class RunConfig(BaseModel):
    """Every parameter a CLI command ran with; echoed into its artifacts.

    Feeding the echo back through ``--config`` reproduces the artifact.
    """

    command: str
    version: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    threads: Optional[int] = None
    seed: Optional[int] = None
    generators: Optional[int] = None
    ambient: Optional[int] = None
    dim: Optional[int] = None
    count: Optional[int] = None
    weight_method: Optional[str] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    bands: Optional[int] = None
    endmembers: Optional[int] = None
    noise: Optional[float] = None
    interleave: Optional[str] = None
    dtype: Optional[str] = None
    patch_size: Optional[int] = None
    stride: Optional[int] = None
    rank_tolerance: Optional[float] = None
    draw_size: Optional[int] = None
    draws_per_class: Optional[int] = None
    mds_dim: Optional[Dimension] = None
    chsa: Optional[ChsaParams] = None

    def echo(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True, by_alias=True)


class ArtifactMeta(BaseModel):
    """Sidecar for artifacts whose own format has no room for metadata."""

    run: dict
    p: Optional[int] = None
    k: Optional[int] = None
