"""
rothsq Artifact Storage

Writes experiment reports to disk.
Supports:
- canonical JSON (byte-identical for identical inputs)
- CSV projections for plotting pipelines
- an in-memory fallback when the output directory is not writable
"""

import csv
import io
import json
import logging
import os
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .settings import settings

# Configure logging
logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert report values into JSON-native types"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return {"num": value.numerator, "den": value.denominator, "float": float(value)}
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            return str(value)
        return value
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if is_dataclass(value):
        return to_jsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def dumps_canonical(payload: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline"""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buffer.getvalue()


def _csv_cell(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (complex, np.complexfloating)):
        return f"{value.real!r}{value.imag:+}j"
    if isinstance(value, np.generic):
        return value.item()
    return value


class ArtifactStorage:
    """
    Handles persistent storage of experiment reports
    """

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir: Optional[Path] = Path(output_dir or settings.output_dir)
        self.memory: Dict[str, str] = {}
        self.last_error: Optional[str] = None

        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            marker = self.output_dir / ".write_check"
            marker.write_text("ok")
            marker.unlink()
        except OSError as e:
            logger.warning(f"Output directory {self.output_dir} not writable ({e}); keeping reports in memory")
            self.last_error = str(e)
            self.output_dir = None

    def save_json(self, name: str, payload: Any) -> Optional[Path]:
        """Save a report as canonical JSON"""
        return self._save(f"{name}.json", dumps_canonical(payload))

    def save_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Optional[Path]:
        """Save a CSV projection of a report"""
        return self._save(f"{name}.csv", csv_text(header, rows))

    def _save(self, filename: str, text: str) -> Optional[Path]:
        self.memory[filename] = text
        if self.output_dir is None:
            return None
        path = self.output_dir / filename
        try:
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_text(text, encoding="utf-8")
            os.replace(tmp, path)
            logger.info(f"Wrote {path}")
            return path
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            self.last_error = str(e)
            return None

    def saved(self) -> List[str]:
        return sorted(self.memory)
