"""
JSON report of one Gap statistic run.

The field list is frozen per SCHEMA_VERSION and documented in
docs/report_schema.md. Key order is fixed, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from data_io.dataset_io import Dataset
from .gapstat import ND, EstimateResult

SCHEMA_VERSION = 1

PathLike = Union[str, Path]


def report_dict(result: EstimateResult, data: Optional[Dataset] = None, source: Optional[str] = None) -> dict:
    curve = result.curve
    selection = result.selection
    out = {
        "schema_version": SCHEMA_VERSION,
        "source": source,
        "config": result.config.as_dict(),
        "n": None if data is None else data.n,
        "p": None if data is None else data.p,
        "k": [int(k) for k in curve.k],
        "w": [float(v) for v in curve.w],
        "e_star": [float(v) for v in curve.e_star],
        "gap": [float(v) for v in curve.gap],
        "s": [float(v) for v in curve.s],
        "rule_trace": list(selection.rule_trace),
        "selected_k": ND if selection.selected_k is None else int(selection.selected_k),
        "labels": None if result.partition is None else [int(x) for x in result.partition.labels],
    }
    return out


def to_json(result: EstimateResult, data: Optional[Dataset] = None, source: Optional[str] = None) -> str:
    return json.dumps(report_dict(result, data, source), indent=2) + "\n"


def write_report(result: EstimateResult, path: PathLike, data: Optional[Dataset] = None,
                 source: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(result, data, source), encoding="utf-8")
    return path
