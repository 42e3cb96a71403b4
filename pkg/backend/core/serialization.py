"""Helpers shared by the per-package ``dao`` modules."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Callable, Iterable, List, Type, TypeVar

from joblib import Parallel, delayed
from pydantic import BaseModel, ValidationError

from core.errors import MalformedArtifact

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SIDECAR_SUFFIX = ".meta.json"

ModelT = TypeVar("ModelT", bound=BaseModel)
ResultT = TypeVar("ResultT")


def sidecar_path(path: Path | str) -> Path:
    path = Path(path)
    return path.with_name(path.name + SIDECAR_SUFFIX)


def write_model(path: Path | str, model: BaseModel) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model.model_dump_json(indent=2, by_alias=True) + "\n", encoding="utf-8")


def read_model(path: Path | str, model_type: Type[ModelT]) -> ModelT:
    path = Path(path)
    try:
        return model_type.model_validate_json(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise MalformedArtifact(f"missing file {path}") from exc
    except (ValidationError, json.JSONDecodeError) as exc:
        raise MalformedArtifact(f"{path} is not a valid {model_type.__name__} document: {exc}") from exc


def parallel_map(
    func: Callable[[Any], ResultT],
    items: Iterable[Any],
    threads: int = 1,
) -> List[ResultT]:
    """Apply ``func`` to each item, optionally through joblib workers.

    Output order always follows input order.
    """
    items = list(items)
    if threads == 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug("Dispatching %d tasks to %s workers", len(items), threads)
    return Parallel(n_jobs=threads, prefer="threads")(delayed(func)(item) for item in items)
