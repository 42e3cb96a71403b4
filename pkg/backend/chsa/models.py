from __future__ import annotations

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from core.config import Config


class ChsaParams(BaseModel):
    """Parameters of the per-point regression.

    Defaults: 7 neighbors, gamma 1e-10, lambda 1e-5.
    """

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    neighbors: int = Field(7, ge=1)
    gamma: float = Field(1e-10, ge=0)
    lambda_: float = Field(1e-5, ge=0, alias="lambda")
    solver_tolerance: float = Field(1e-9, gt=0)
    negativity_threshold: float = Field(1e-7, ge=0)

    @classmethod
    def from_config(cls, **overrides) -> "ChsaParams":
        values = {
            "neighbors": Config.CHSA_NEIGHBORS,
            "gamma": Config.CHSA_GAMMA,
            "lambda_": Config.CHSA_LAMBDA,
            "solver_tolerance": Config.SOLVER_TOLERANCE,
            "negativity_threshold": Config.NEGATIVITY_THRESHOLD,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


class PointRecord(BaseModel):
    index: int
    neighbor_indices: List[int]
    weights: List[float]
    weight_norm: float
    min_weight: float
    is_flagged: bool
    residual: float


class StratificationResult(BaseModel):
    params: ChsaParams
    records: List[PointRecord]
    vertex_indices: List[int] = Field(default_factory=list)
