from .dao import load_cube, write_cube
from .models import ClassSampleSet, ExtractionReport, HyperspectralCube, PatchSet
from .service import (
    class_distance_summary,
    embed_class_samples,
    extract_endmembers,
    extract_patches,
    sample_classes,
    simplex_dataset,
    synthetic_cube,
)

__all__ = [
    "ClassSampleSet",
    "ExtractionReport",
    "HyperspectralCube",
    "PatchSet",
    "class_distance_summary",
    "embed_class_samples",
    "extract_endmembers",
    "extract_patches",
    "load_cube",
    "sample_classes",
    "simplex_dataset",
    "synthetic_cube",
    "write_cube",
]
