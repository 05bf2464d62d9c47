"""
Within-cluster dispersion measures.

    D_r   = sum over ordered pairs (i, i') in cluster r of d_ii'
            (each unordered pair counted twice, diagonal contributes 0)
    W_k   = sum_r D_r / (2 n_r)                 pooled
    W'_k  = sum_r 2 D_r / (n_r (n_r - 1))       weighted, singleton clusters add 0

With squared Euclidean distances the ordered-pair convention makes W_k
equal to the within-cluster sum of squared deviations from the centroids.
W'_k is implemented exactly as printed, so it is twice the mean unordered
pairwise distance per cluster; the factor cancels in every selection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from common.errors import DegenerateDispersion, DimensionMismatch, IndexOutOfRange, InvalidConfig, InvalidK
from data_io.dataset_io import Dataset
from .linkage import MergeTree, Partition, cut_tree
from .metric import DistanceMatrix

logger = logging.getLogger(__name__)

POOLED = "pooled"
WEIGHTED = "weighted"
KINDS = (POOLED, WEIGHTED)


@dataclass(frozen=True)
class DispersionCurve:
    """w[k-1] is the dispersion of the k-cluster cut, k = 1..k_max."""
    variant: str
    w: np.ndarray

    @property
    def k_max(self) -> int:
        return int(self.w.size)

    def at(self, k: int) -> float:
        return float(self.w[k - 1])


def _check_partition(part: Partition, dm: DistanceMatrix) -> None:
    if part.n != dm.n:
        raise DimensionMismatch(f"partition over {part.n} points, distance matrix over {dm.n}")


def cluster_pair_sum(part: Partition, dm: DistanceMatrix, r: int) -> float:
    """D_r: ordered-pair sum of distances inside cluster r."""
    _check_partition(part, dm)
    if not 0 <= r < part.k:
        raise IndexOutOfRange(f"cluster index {r} outside 0..{part.k - 1}")
    idx = part.members(r)
    if idx.size < 2:
        return 0.0
    return float(dm.d[np.ix_(idx, idx)].sum())


def _pair_sums(part: Partition, dm: DistanceMatrix):
    _check_partition(part, dm)
    sizes = part.sizes()
    sums = np.array([cluster_pair_sum(part, dm, r) for r in range(part.k)], dtype=np.float64)
    return sums, sizes


def pooled_dispersion(part: Partition, dm: DistanceMatrix) -> float:
    """W_k = sum_r D_r / (2 n_r)."""
    sums, sizes = _pair_sums(part, dm)
    return float(np.sum(sums / (2.0 * sizes)))


def weighted_dispersion(part: Partition, dm: DistanceMatrix) -> float:
    """W'_k = sum_r 2 D_r / (n_r (n_r - 1)); singletons contribute 0."""
    sums, sizes = _pair_sums(part, dm)
    multi = sizes > 1
    return float(np.sum(2.0 * sums[multi] / (sizes[multi] * (sizes[multi] - 1.0))))


EVALUATORS = {
    POOLED: pooled_dispersion,
    WEIGHTED: weighted_dispersion,
}


def dispersion_curve(
    data: Dataset,
    dm: DistanceMatrix,
    tree: MergeTree,
    k_max: int,
    variant: str = POOLED,
    require_positive: bool = True,
) -> DispersionCurve:
    """
    Dispersion of cut_tree(tree, k) for k = 1..k_max.

    Args:
        require_positive: raise DegenerateDispersion when a pooled W_k is 0
            (log variants need every W_k > 0).

    Raises:
        InvalidK: k_max outside [1, n-1].
        DegenerateDispersion: pooled W_k == 0 and require_positive.
    """
    if variant not in EVALUATORS:
        raise InvalidConfig(f"unknown dispersion variant {variant!r}")
    n = dm.n
    if data.n != n or tree.n != n:
        raise DimensionMismatch(f"dataset n={data.n}, matrix n={n}, tree n={tree.n}")
    if not 1 <= k_max < n:
        raise InvalidK(f"k_max must be in [1, {n - 1}], got {k_max}")

    evaluate = EVALUATORS[variant]
    w = np.empty(k_max, dtype=np.float64)
    for k in range(1, k_max + 1):
        w[k - 1] = evaluate(cut_tree(tree, k), dm)
        if require_positive and variant == POOLED and w[k - 1] <= 0.0:
            raise DegenerateDispersion(k)
    w.setflags(write=False)
    return DispersionCurve(variant, w)
