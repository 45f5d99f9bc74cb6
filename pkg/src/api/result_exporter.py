import csv
import json
import logging
import math
import os
from enum import Enum
from fractions import Fraction
from io import StringIO
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from src.models.results import ExperimentResult

logger = logging.getLogger(__name__)

CSV_SCHEMA_VERSION = 1


def to_builtin(obj):
    """
    Convert numpy scalars/arrays, dataclass models, enums and Fractions into
    plain JSON types. Non-finite floats become None.
    """
    if hasattr(obj, 'to_dict'):
        return to_builtin(obj.to_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return [to_builtin(item) for item in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(item) for item in obj]
    return obj


def format_cell(value) -> str:
    """Shortest round-trip decimal for floats, integers as-is, empty for None"""
    value = to_builtin(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    output = StringIO()
    writer = csv.DictWriter(output, fieldnames=list(columns), extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({column: format_cell(row.get(column)) for column in columns})
    csv_data = output.getvalue()
    output.close()
    return csv_data


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(to_builtin(payload), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


class ResultExporter:
    """Writes per-trial CSV and summary JSON artifacts under one output directory"""

    def __init__(self, output_dir: str):
        self.output_dir = output_dir

    def _path(self, filename: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, filename)

    def _write(self, filename: str, text: str) -> str:
        path = self._path(filename)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info(f"💾 Wrote {path}")
        return path

    def write_csv(self, name: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
        return self._write(f"{name}.csv", render_csv(columns, rows))

    def write_summary(self, name: str, result: ExperimentResult, config: Optional[Dict[str, Any]] = None,
                      seed: Optional[int] = None, wall_time_ms: Optional[float] = None) -> str:
        payload = {
            'experiment': name,
            'kind': result.kind,
            'csv_schema_version': CSV_SCHEMA_VERSION,
            'seed': seed,
            'config': config or {},
            'summary': result.summary if result.summaries else None,
            'summaries': result.summaries,
            'report': result.report,
            'wall_time_ms': wall_time_ms,
        }
        return self._write(f"{name}.summary.json", render_json(payload))

    def export(self, name: str, result: ExperimentResult, config: Optional[Dict[str, Any]] = None,
               seed: Optional[int] = None, wall_time_ms: Optional[float] = None) -> Dict[str, str]:
        try:
            return {
                'csv': self.write_csv(name, result.columns, result.rows),
                'json': self.write_summary(name, result, config, seed, wall_time_ms),
            }
        except OSError as e:
            logger.error(f"❌ Export of {name} failed: {e}")
            raise
