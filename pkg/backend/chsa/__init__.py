from .models import ChsaParams, PointRecord, StratificationResult
from .service import chsa_objective, nearest_neighbors, solve_weights, stratify, top_vertices

__all__ = [
    "ChsaParams",
    "PointRecord",
    "StratificationResult",
    "chsa_objective",
    "nearest_neighbors",
    "solve_weights",
    "stratify",
    "top_vertices",
]
