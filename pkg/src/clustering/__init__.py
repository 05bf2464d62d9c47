"""
Distances, average-linkage hierarchical clustering and dispersion measures.

Main exports:
    - pairwise_matrix, squared_euclidean, DistanceMatrix
    - average_linkage, cut_tree, MergeTree, Partition
    - pooled_dispersion, weighted_dispersion, dispersion_curve

Usage:
    from clustering import pairwise_matrix, average_linkage, cut_tree

    dm = pairwise_matrix(data)
    tree = average_linkage(dm)
    part = cut_tree(tree, 3)
"""

from .dispersion import (
    DispersionCurve,
    cluster_pair_sum,
    dispersion_curve,
    pooled_dispersion,
    weighted_dispersion,
)
from .linkage import Merge, MergeTree, Partition, average_linkage, cut_tree, height_inversions
from .metric import DistanceMatrix, pairwise_matrix, squared_euclidean

__all__ = [
    'DispersionCurve', 'cluster_pair_sum', 'dispersion_curve', 'pooled_dispersion',
    'weighted_dispersion', 'Merge', 'MergeTree', 'Partition', 'average_linkage',
    'cut_tree', 'height_inversions', 'DistanceMatrix', 'pairwise_matrix', 'squared_euclidean',
]
