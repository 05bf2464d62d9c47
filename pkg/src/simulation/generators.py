"""
Data generators for the three simulation families.

overlap     100 x 2: rows 0-49 ~ N(0, 1) per coordinate, rows 50-99 ~ N(delta, 1)
unequal     two bivariate normal clusters, means (0, 0) and (5, 0), identity
            covariance, sizes from SIZE_ROWS; both clusters are prefixes
            of fixed-size pools so every row reuses the same points
degenerate  100 x p: rows 0-49 ~ U[0, 10]^p, rows 50-99 have feature 1 ~ U[0, 10]
            and every other feature exactly 0

Normal variates come from gap.streams.standard_normal (Box-Muller).
Row labels hold the true cluster ("1" or "2").
"""

from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

from common.errors import InvalidExperiment, InvalidRow
from data_io.dataset_io import Dataset
from gap.streams import derive_rng, normal

CLUSTER_SIZE = 50
UNIFORM_HIGH = 10.0

# row -> (N1, N2); m = N1 / N2 is 1, 2, 4, 8, 16
SIZE_ROWS: Dict[int, Tuple[int, int]] = {
    1: (765, 765),
    2: (1020, 510),
    3: (1224, 306),
    4: (1360, 170),
    5: (1440, 90),
}
POOL1_SIZE = max(n1 for n1, _ in SIZE_ROWS.values())
POOL2_SIZE = max(n2 for _, n2 in SIZE_ROWS.values())
UNEQUAL_MEANS = ((0.0, 0.0), (5.0, 0.0))


def _labels(sizes) -> list:
    out = []
    for cluster, size in enumerate(sizes, start=1):
        out.extend([str(cluster)] * size)
    return out


def gen_overlap(delta: float, rng: np.random.Generator) -> Dataset:
    """Two 50-point bivariate normal clusters whose means differ by delta per coordinate."""
    if not delta >= 0:
        raise InvalidExperiment(f"delta must be >= 0, got {delta}")
    first = normal(rng, 0.0, 1.0, (CLUSTER_SIZE, 2))
    second = normal(rng, float(delta), 1.0, (CLUSTER_SIZE, 2))
    return Dataset(np.vstack([first, second]), _labels([CLUSTER_SIZE, CLUSTER_SIZE]))


def unequal_pools(shared_pool_seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """The two full-size pools every size row takes its prefixes from."""
    pool1 = normal(derive_rng(shared_pool_seed, 1), UNEQUAL_MEANS[0], 1.0, (POOL1_SIZE, 2))
    pool2 = normal(derive_rng(shared_pool_seed, 2), UNEQUAL_MEANS[1], 1.0, (POOL2_SIZE, 2))
    return pool1, pool2


def gen_unequal(row: int, shared_pool_seed: int) -> Dataset:
    """
    First N1 points of pool 1 followed by the first N2 points of pool 2.

    Raises:
        InvalidRow: row not in 1..5.
    """
    if row not in SIZE_ROWS:
        raise InvalidRow(f"row must be one of {sorted(SIZE_ROWS)}, got {row}")
    n1, n2 = SIZE_ROWS[row]
    pool1, pool2 = unequal_pools(shared_pool_seed)
    return Dataset(np.vstack([pool1[:n1], pool2[:n2]]), _labels([n1, n2]))


def gen_degenerate(p: int, rng: np.random.Generator) -> Dataset:
    """Full-dimensional uniform cluster next to a cluster living on feature 1 only."""
    if int(p) != p or p < 2:
        raise InvalidExperiment(f"dimension p must be an integer >= 2, got {p}")
    p = int(p)
    first = rng.random((CLUSTER_SIZE, p)) * UNIFORM_HIGH
    second = np.zeros((CLUSTER_SIZE, p), dtype=np.float64)
    second[:, 0] = rng.random(CLUSTER_SIZE) * UNIFORM_HIGH
    return Dataset(np.vstack([first, second]), _labels([CLUSTER_SIZE, CLUSTER_SIZE]))
