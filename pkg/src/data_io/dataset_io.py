"""
Dataset loading, validation and description.

A Dataset is an n x p matrix of finite reals with optional row labels and
feature names. Values are stored as a read-only float64 numpy array so a
Dataset can be shared between threads without copying.

CSV dialect:
    - comma separator, "." decimal point
    - optional single header line
    - optional label column (excluded from the values)

No scaling or standardization is applied anywhere in this module.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from common.errors import EmptyDataset, InvalidDataset, ParseError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Dataset:
    """
    n x p observation matrix.

    Invariants (checked on construction):
        - n >= 2, p >= 1
        - every entry is finite
        - row_labels has n entries, feature_names has p entries (when given)
    """
    values: np.ndarray
    row_labels: Optional[List[str]] = None
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2:
            raise InvalidDataset(f"values must be a 2D matrix, got shape {values.shape}")
        n, p = values.shape
        if n < 2 or p < 1:
            raise EmptyDataset(f"need n >= 2 rows and p >= 1 columns, got {n}x{p}")
        if not np.all(np.isfinite(values)):
            raise InvalidDataset("dataset contains NaN or infinite entries")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.row_labels is not None:
            labels = [str(x) for x in self.row_labels]
            if len(labels) != n:
                raise InvalidDataset(f"{len(labels)} row labels for {n} rows")
            object.__setattr__(self, "row_labels", labels)
        if self.feature_names is not None:
            names = [str(x) for x in self.feature_names]
            if len(names) != p:
                raise InvalidDataset(f"{len(names)} feature names for {p} columns")
            object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def p(self) -> int:
        return int(self.values.shape[1])

    def scaled(self, c: float) -> "Dataset":
        """Same dataset with every value multiplied by c."""
        return Dataset(self.values * c, self.row_labels, self.feature_names)

    def take(self, rows: Sequence[int]) -> "Dataset":
        """Sub-dataset with the given rows, in the given order."""
        idx = np.asarray(rows, dtype=int)
        labels = None if self.row_labels is None else [self.row_labels[i] for i in idx]
        return Dataset(self.values[idx], labels, self.feature_names)


@dataclass(frozen=True)
class FeatureRanges:
    """Per-feature bounding box [mins[j], maxs[j]] of a dataset."""
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        mins = np.array(self.mins, dtype=np.float64, copy=True)
        maxs = np.array(self.maxs, dtype=np.float64, copy=True)
        if mins.shape != maxs.shape or mins.ndim != 1:
            raise InvalidDataset("mins and maxs must be vectors of equal length")
        if np.any(mins > maxs):
            raise InvalidDataset("feature range with min > max")
        mins.setflags(write=False)
        maxs.setflags(write=False)
        object.__setattr__(self, "mins", mins)
        object.__setattr__(self, "maxs", maxs)

    @property
    def widths(self) -> np.ndarray:
        return self.maxs - self.mins


def _parse_cell(text: str, row: int, column: int) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(row, column, f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ParseError(row, column, f"not a finite number: {text!r}")
    return value


def _records(reader):
    """(line number, record) pairs; decoding and csv errors become ParseError."""
    while True:
        try:
            record = next(reader)
        except StopIteration:
            return
        except UnicodeDecodeError as exc:
            raise ParseError(reader.line_num + 1, 1, f"not valid UTF-8: {exc.reason}") from None
        except csv.Error as exc:
            raise ParseError(max(reader.line_num, 1), 1, str(exc)) from None
        yield reader.line_num, record


def load_csv(
    path: PathLike,
    has_header: bool = False,
    label_column: Optional[int] = None,
) -> Dataset:
    """
    Read a numeric CSV file into a Dataset.

    Args:
        path: CSV file.
        has_header: first line holds feature names.
        label_column: 0-based column index holding row labels (excluded from values).

    Returns:
        Dataset with n = data rows and p = numeric columns.

    Raises:
        ParseError: non-numeric cell, ragged row, bytes that are not UTF-8 or a
            line the csv module rejects (1-based file row/column).
        EmptyDataset: fewer than 2 rows or no numeric column.
    """
    path = Path(path)
    rows: List[List[float]] = []
    labels: List[str] = []
    feature_names: Optional[List[str]] = None
    width: Optional[int] = None

    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for line_no, record in _records(reader):
            if not record or all(not cell.strip() for cell in record):
                continue
            if width is None:
                width = len(record)
                if label_column is not None and not 0 <= label_column < width:
                    raise ParseError(line_no, label_column + 1, "label column outside the row")
            elif len(record) != width:
                raise ParseError(line_no, min(len(record), width) + 1,
                                 f"ragged row: {len(record)} cells, expected {width}")

            if has_header and feature_names is None:
                feature_names = [c.strip() for j, c in enumerate(record) if j != label_column]
                continue

            numeric = []
            for j, cell in enumerate(record):
                if j == label_column:
                    labels.append(cell.strip())
                else:
                    numeric.append(_parse_cell(cell, line_no, j + 1))
            rows.append(numeric)

    p = 0 if width is None else width - (1 if label_column is not None else 0)
    if len(rows) < 2 or p < 1:
        raise EmptyDataset(f"{path}: need at least 2 data rows and 1 numeric column")

    data = Dataset(
        np.array(rows, dtype=np.float64),
        row_labels=labels if label_column is not None else None,
        feature_names=feature_names,
    )
    logger.info("loaded %s: n=%d p=%d", path, data.n, data.p)
    return data


def save_csv(data: Dataset, path: PathLike, header: bool = True) -> None:
    """
    Write a Dataset as CSV. Floats are written with repr() so load_csv
    reads back identical doubles. Labels (if any) go in the last column.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        if header:
            names = data.feature_names or [f"x{j + 1}" for j in range(data.p)]
            if data.row_labels is not None:
                names = list(names) + ["label"]
            writer.writerow(names)
        for i in range(data.n):
            row = [repr(float(v)) for v in data.values[i]]
            if data.row_labels is not None:
                row.append(data.row_labels[i])
            writer.writerow(row)


def feature_ranges(data: Dataset) -> FeatureRanges:
    """Column-wise min and max: the support of the uniform reference box."""
    return FeatureRanges(data.values.min(axis=0), data.values.max(axis=0))


def describe(data: Dataset) -> dict:
    """Summary statistics per feature (n, p, min, max, mean, std)."""
    names = data.feature_names or [f"x{j + 1}" for j in range(data.p)]
    values = data.values
    return {
        "n": data.n,
        "p": data.p,
        "features": [
            {
                "name": names[j],
                "min": float(values[:, j].min()),
                "max": float(values[:, j].max()),
                "mean": float(values[:, j].mean()),
                "std": float(values[:, j].std()),
            }
            for j in range(data.p)
        ],
    }
