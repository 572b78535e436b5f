"""
Point-cloud export of samplers as pandas DataFrames, CSV and JSON.
"""

import itertools
import json
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import numpy as np
import pandas as pd

from app.core.config import settings
from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.geom.embeddings import EmbeddingSampler

logger = get_logger(__name__)


def parameter_grid(param_dim: int, grid: int, radius: float = 1.0) -> np.ndarray:
    """Tensor grid of ``grid`` points per parameter on [-radius, radius], lexicographic order."""
    if grid < 1:
        raise UsageError("Grid size must be at least 1")
    axis = np.linspace(-radius, radius, grid) if grid > 1 else np.zeros(1)
    return np.array(list(itertools.product(axis, repeat=param_dim)), dtype=float).reshape(-1, param_dim)


def _param_labels(sampler: EmbeddingSampler) -> list:
    if sampler.item is not None:
        return sampler.item.param_labels()
    return [f"p{i + 1}" for i in range(sampler.param_dim)]


def _coordinate_labels(sampler: EmbeddingSampler) -> list:
    if sampler.coordinate_labels:
        return list(sampler.coordinate_labels)
    return [f"x{i + 1}" for i in range(sampler.ambient_dim)]


def export_point_cloud(sampler: EmbeddingSampler, grid: Optional[int] = None, radius: float = 1.0) -> pd.DataFrame:
    """One row per grid point: parameters followed by ambient coordinates.

    The header (item and ambient gram) is kept in ``frame.attrs``.
    """
    params = parameter_grid(sampler.param_dim, grid or settings.default_grid, radius)
    points = np.array([sampler.evaluate(p) for p in params]).reshape(len(params), sampler.ambient_dim)
    frame = pd.DataFrame(
        np.hstack([params, points]),
        columns=_param_labels(sampler) + _coordinate_labels(sampler),
    )
    frame.attrs["item"] = sampler.item.item if sampler.item is not None else None
    frame.attrs["source"] = dict(sampler.source)
    frame.attrs["ambient_gram"] = sampler.gram.tolist()
    frame.attrs["param_columns"] = _param_labels(sampler)
    logger.debug("Point cloud exported", rows=len(frame), columns=len(frame.columns))
    return frame


def header_of(frame: pd.DataFrame) -> Dict[str, Any]:
    return {
        "item": frame.attrs.get("item"),
        "source": frame.attrs.get("source", {}),
        "ambient_gram": frame.attrs.get("ambient_gram", []),
        "param_columns": frame.attrs.get("param_columns", []),
    }


def dump_point_cloud(frame: pd.DataFrame, handle: TextIO, fmt: str = "csv") -> None:
    """Write CSV (header as ``#`` comment lines) or JSON to an open text handle.

    Floats are written with ``repr`` so every value reads back bit for bit.
    """
    header = header_of(frame)
    if fmt == "csv":
        for key, value in header.items():
            handle.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        frame.to_csv(handle, index=False, lineterminator="\n")
    elif fmt == "json":
        document = {
            **header,
            "columns": [str(c) for c in frame.columns],
            "rows": [[float(v) for v in row] for row in frame.itertuples(index=False, name=None)],
        }
        handle.write(json.dumps(document, sort_keys=True, indent=2) + "\n")
    else:
        raise UsageError(f"Unknown point-cloud format: {fmt}")


def write_point_cloud(frame: pd.DataFrame, path: Path, fmt: Optional[str] = None) -> Path:
    """Write to ``path``; the format comes from ``fmt`` or the file suffix."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    with path.open("w", encoding="utf-8", newline="") as handle:
        dump_point_cloud(frame, handle, fmt)
    logger.info("Point cloud written", path=str(path), rows=len(frame), format=fmt)
    return path


def read_point_cloud(path: Path) -> pd.DataFrame:
    """Inverse of ``write_point_cloud`` for the CSV format."""
    path = Path(path)
    attrs: Dict[str, Any] = {}
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].partition(": ")
            attrs[key] = json.loads(value)
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    frame.attrs.update(attrs)
    return frame
