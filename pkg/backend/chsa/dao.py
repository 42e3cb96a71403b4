from __future__ import annotations

from pathlib import Path

from core.serialization import read_model, write_model

from .models import StratificationResult


def write_stratification(path: Path | str, result: StratificationResult) -> None:
    write_model(path, result)


def read_stratification(path: Path | str) -> StratificationResult:
    return read_model(path, StratificationResult)
