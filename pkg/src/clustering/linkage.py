"""
Agglomerative hierarchical clustering with group-average linkage.

Merge tree representation:
    Leaves are node ids 0..n-1, the t-th merge creates node id n+t.
    Each merge records (left, right, height, size) where height is the
    group-average dissimilarity d(G, H) of the two clusters at merge time.

Algorithm:
    A working copy of the distance matrix holds the current inter-cluster
    averages. A merged cluster G u H takes the slot of the lower-index
    cluster, and its row is updated with the exact weighted average

        d(G u H, K) = (N_G d(G, K) + N_H d(H, K)) / (N_G + N_H)

    Each active slot caches its row minimum and the column where it was
    found. After a merge only rows whose cached minimum pointed at one of
    the two merged slots are rescanned; the others just compare against
    the new merged column. That keeps each step O(n) in numpy work
    for typical inputs.

Tie rule:
    Among pairs whose dissimilarity is within TIE_TOL of the minimum, the
    pair with the lowest smaller slot wins, then the lowest larger slot.
    Slot i always holds the cluster whose smallest member index is i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from common.errors import InvalidK
from .metric import DistanceMatrix

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class MergeTree:
    """Complete merge history of n leaves (n-1 merges)."""
    n: int
    merges: List[Merge]

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges], dtype=np.float64)

    def to_linkage_matrix(self) -> np.ndarray:
        """(n-1) x 4 array in SciPy's linkage layout: lower id, higher id, height, size."""
        return np.array(
            [[min(m.left, m.right), max(m.left, m.right), m.height, m.size] for m in self.merges],
            dtype=np.float64,
        ).reshape(-1, 4)


@dataclass(frozen=True)
class Partition:
    """
    Cluster labels 0..k-1 for n observations. Labels are numbered in order
    of each cluster's smallest member index, so equal partitions compare equal.
    """
    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def members(self, r: int) -> np.ndarray:
        return np.flatnonzero(self.labels == r)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def cluster_sets(self) -> List[frozenset]:
        return [frozenset(self.members(r).tolist()) for r in range(self.k)]

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build a Partition from arbitrary labels, renumbering canonically."""
        labels = np.asarray(labels)
        mapping = {}
        canon = np.empty(labels.size, dtype=np.int64)
        for i, lab in enumerate(labels.tolist()):
            if lab not in mapping:
                mapping[lab] = len(mapping)
            canon[i] = mapping[lab]
        return cls(canon, len(mapping))


def _rescan(work: np.ndarray, row: int, row_min: np.ndarray, row_arg: np.ndarray) -> None:
    j = int(np.argmin(work[row]))
    row_arg[row] = j
    row_min[row] = work[row, j]


def average_linkage(dm: DistanceMatrix) -> MergeTree:
    """
    Group-average agglomerative clustering of a distance matrix.

    Returns:
        MergeTree with n-1 merges in merge order.
    """
    n = dm.n
    work = np.array(dm.d, dtype=np.float64, copy=True)
    np.fill_diagonal(work, np.inf)

    sizes = np.ones(n, dtype=np.int64)
    node_of = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)

    row_arg = np.argmin(work, axis=1)
    row_min = work[np.arange(n), row_arg].copy()

    merges: List[Merge] = []
    for step in range(n - 1):
        best = row_min.min()
        threshold = best + TIE_TOL
        i = int(np.flatnonzero(row_min <= threshold)[0])
        # lowest partner of i within the global tie band; j > i follows
        j = int(np.flatnonzero(work[i] <= threshold)[0])
        height = float(work[i, j])

        ni, nj = sizes[i], sizes[j]
        merges.append(Merge(int(node_of[i]), int(node_of[j]), height, int(ni + nj)))

        merged = (ni * work[i] + nj * work[j]) / (ni + nj)
        merged[~active] = np.inf
        merged[i] = np.inf
        merged[j] = np.inf
        work[i, :] = merged
        work[:, i] = merged
        work[j, :] = np.inf
        work[:, j] = np.inf

        active[j] = False
        row_min[j] = np.inf
        sizes[i] = ni + nj
        node_of[i] = n + step

        if step == n - 2:
            break

        stale = np.flatnonzero(active & ((row_arg == i) | (row_arg == j)))
        improved = active & (merged < row_min)
        row_min[improved] = merged[improved]
        row_arg[improved] = i
        for row in stale:
            _rescan(work, int(row), row_min, row_arg)
        _rescan(work, i, row_min, row_arg)

    tree = MergeTree(n, merges)
    inversions = height_inversions(tree)
    if inversions:
        logger.info("merge heights decrease at %d merge(s)", len(inversions))
    return tree


def height_inversions(tree: MergeTree) -> List[int]:
    """Merge indices t where heights[t] < heights[t-1] (reported, not enforced)."""
    h = tree.heights
    return [int(t) for t in np.flatnonzero(h[1:] < h[:-1]) + 1]


def cut_tree(tree: MergeTree, k: int) -> Partition:
    """
    Partition into k clusters by undoing the last k-1 merges.

    Raises:
        InvalidK: k outside [1, n].
    """
    n = tree.n
    if not 1 <= k <= n:
        raise InvalidK(f"k must be in [1, {n}], got {k}")

    # parent pointers of the first n-k merges; a parent id is always larger
    # than its children, so one descending sweep resolves every root
    parent = list(range(2 * n - 1))
    for t in range(n - k):
        m = tree.merges[t]
        parent[m.left] = n + t
        parent[m.right] = n + t

    root = parent[:]
    for node in range(2 * n - 2, -1, -1):
        if parent[node] != node:
            root[node] = root[parent[node]]
    return Partition.from_labels(root[:n])
