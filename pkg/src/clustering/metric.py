"""
Pairwise dissimilarities.

Supported metrics:
    - "sqeuclidean": sum_j (x_j - y_j)^2   (default; makes W_k a centroid SSQ)
    - "euclidean":   sqrt of the above

pairwise_matrix evaluates each unordered pair once (row i against rows
i+1..n-1) and mirrors it, so the matrix is exactly symmetric with an exact
zero diagonal. Rows can be split into blocks evaluated on a thread pool;
every row is computed by the same kernel no matter which block it falls
in, so the result does not depend on the number of threads.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from common.errors import DimensionMismatch, UnsupportedMetric
from data_io.dataset_io import Dataset

logger = logging.getLogger(__name__)

SQEUCLIDEAN = "sqeuclidean"
EUCLIDEAN = "euclidean"
METRICS = (SQEUCLIDEAN, EUCLIDEAN)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric n x n matrix of nonnegative dissimilarities (read-only)."""
    d: np.ndarray
    metric_tag: str = SQEUCLIDEAN

    def __post_init__(self):
        d = np.array(self.d, dtype=np.float64, copy=True)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DimensionMismatch(f"distance matrix must be square, got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return int(self.d.shape[0])

    def scaled(self, factor: float) -> "DistanceMatrix":
        return DistanceMatrix(self.d * factor, self.metric_tag)


def check_metric(metric: str) -> str:
    if metric not in METRICS:
        raise UnsupportedMetric(f"unsupported metric {metric!r}; choose one of {', '.join(METRICS)}")
    return metric


def squared_euclidean(x: Sequence[float], y: Sequence[float]) -> float:
    """Sum of squared coordinate differences."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatch(f"vectors of length {x.size} and {y.size}")
    diff = x - y
    return float(np.dot(diff, diff))


def _row_block(values: np.ndarray, start: int, stop: int) -> list:
    """Squared distances of rows start..stop-1 to every later row."""
    out = []
    for i in range(start, stop):
        diff = values[i + 1:] - values[i]
        out.append(np.einsum("ij,ij->i", diff, diff))
    return out


def _blocks(n: int, parts: int) -> list:
    # equal row counts; rows near the top carry more pairs
    edges = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def pairwise_matrix(data: Dataset, metric: str = SQEUCLIDEAN, threads: int = 1) -> DistanceMatrix:
    """
    Full n x n dissimilarity matrix of a Dataset.

    Args:
        data: observations.
        metric: "sqeuclidean" or "euclidean".
        threads: number of row blocks evaluated concurrently (result unchanged).

    Raises:
        UnsupportedMetric: unknown metric name.
    """
    check_metric(metric)
    values = data.values
    n = data.n
    blocks = _blocks(n, max(1, int(threads)))

    if len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            pieces = list(pool.map(lambda blk: _row_block(values, *blk), blocks))
    else:
        pieces = [_row_block(values, *blk) for blk in blocks]

    d = np.zeros((n, n), dtype=np.float64)
    i = 0
    for piece in pieces:
        for row in piece:
            d[i, i + 1:] = row
            i += 1
    if metric == EUCLIDEAN:
        np.sqrt(d, out=d)
    # mirror the upper triangle
    d = np.triu(d, 1)
    d = d + d.T
    return DistanceMatrix(d, metric)
