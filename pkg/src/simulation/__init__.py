"""
Simulation families (overlap, unequal sizes, degenerate high-dimensional)
and the batch harness that tallies selected cluster counts.

Main exports:
    - gen_overlap, gen_unequal, gen_degenerate: data generators
    - ExperimentSpec, run_experiment, sweep: batch execution
    - run_dataset: every variant on one fixed dataset over several reference seeds
    - summarize, write_summary, write_traces: CSV/JSON output
"""

from .generators import SIZE_ROWS, gen_degenerate, gen_overlap, gen_unequal
from .simharness import (
    ALL_VARIANTS,
    BUCKETS,
    DEGENERATE,
    FAMILIES,
    OVERLAP,
    UNEQUAL,
    ExperimentReport,
    ExperimentSpec,
    mean_curve_frame,
    modal_selection,
    run_dataset,
    run_experiment,
    success_fraction,
    summarize,
    sweep,
    write_summary,
    write_traces,
)

__all__ = [
    'SIZE_ROWS', 'gen_degenerate', 'gen_overlap', 'gen_unequal', 'ALL_VARIANTS', 'BUCKETS', 'DEGENERATE',
    'FAMILIES', 'OVERLAP', 'UNEQUAL', 'ExperimentReport', 'ExperimentSpec', 'mean_curve_frame',
    'modal_selection', 'run_dataset', 'run_experiment', 'success_fraction', 'summarize', 'sweep',
    'write_summary', 'write_traces',
]
