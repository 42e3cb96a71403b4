from .models import DistanceMatrix, Subspace
from .service import (
    check_homogeneous,
    chordal_distance,
    distance_matrix,
    orthonormalize,
    principal_angles,
    projection_embedding,
    random_subspace,
)

__all__ = [
    "DistanceMatrix",
    "Subspace",
    "check_homogeneous",
    "chordal_distance",
    "distance_matrix",
    "orthonormalize",
    "principal_angles",
    "projection_embedding",
    "random_subspace",
]
