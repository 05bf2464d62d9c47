"""
Gap statistic estimation of the number of clusters.

Main exports:
    - GapConfig, GapVariant: run settings
    - estimate_clusters, estimate_many: end-to-end pipeline
    - sample_reference, reference_ensemble, gap_curve, simulation_error, select_k
    - write_report: versioned JSON report

Usage:
    from gap import GapConfig, estimate_clusters

    result = estimate_clusters(data, GapConfig(variant="direct-pooled", seed=7))
    print(result.selection.label)
"""

from .gapstat import (
    DEFAULT_B,
    DEFAULT_K_MAX,
    DEFAULT_SEED,
    ND,
    EstimateResult,
    GapConfig,
    GapCurve,
    GapVariant,
    ReferenceEnsemble,
    SelectionResult,
    curve_frame,
    estimate_clusters,
    estimate_many,
    gap_curve,
    implication_preconditions,
    reference_ensemble,
    sample_reference,
    select_k,
    simulation_error,
)
from .report import SCHEMA_VERSION, report_dict, to_json, write_report
from .streams import derive_rng, derive_seed, standard_normal

__all__ = [
    'DEFAULT_B', 'DEFAULT_K_MAX', 'DEFAULT_SEED', 'ND', 'EstimateResult', 'GapConfig',
    'GapCurve', 'GapVariant', 'ReferenceEnsemble', 'SelectionResult', 'curve_frame',
    'estimate_clusters', 'estimate_many', 'gap_curve', 'implication_preconditions',
    'reference_ensemble', 'sample_reference', 'select_k', 'simulation_error',
    'SCHEMA_VERSION', 'report_dict', 'to_json', 'write_report',
    'derive_rng', 'derive_seed', 'standard_normal',
]
