"""
Desk-scale runs of the three simulation families.

Runs the overlap sweep, every unequal-size row and the degenerate
experiment in 2 and 100 dimensions with plain Euclidean distances, then
records selection frequencies, per-repetition traces and mean Gap curves
under results/. Iris (and Breast Cancer, when its raw file is present)
gets all four Gap variants over ten reference seeds.

Output files:
- results/<family>_summary.csv      selection frequencies per parameter
- results/<family>_traces.json      selected k per repetition and variant
- results/<family>_mean_curves.csv  average Gap and W_k curves (plot data)
- results/datasets_summary.csv       four-variant selection frequencies on the real datasets

Usage:
    python3 src/simulation/run_experiments.py [--threads 4] [--reps 50] [--skip-unequal] [--skip-datasets]
"""

import argparse
import os
import sys
import time

SRC_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if SRC_DIR not in sys.path:
    sys.path.append(SRC_DIR)

import pandas as pd

from clustering.metric import EUCLIDEAN
from common.log import setup_logging
from data_io.dataset_io import load_csv
from data_io.prepare import BREAST_CANCER_RAW, prepare_breast_cancer, write_iris_csv
from gap.gapstat import GapConfig, GapVariant
from simulation.generators import SIZE_ROWS
from simulation.simharness import (
    ALL_VARIANTS,
    DEGENERATE,
    OVERLAP,
    UNEQUAL,
    mean_curve_frame,
    modal_selection,
    run_dataset,
    success_fraction,
    sweep,
    write_summary,
    write_traces,
)

RESULTS_DIR = "results"
OVERLAP_DELTAS = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]
DEGENERATE_DIMS = [2, 100]
UNEQUAL_ROWS = sorted(SIZE_ROWS)

BASE_REPETITIONS = 50
UNEQUAL_REPETITIONS = 10
UNEQUAL_B = 10
MASTER_SEED = 2024
METRIC = EUCLIDEAN

VARIANTS = (GapVariant.LOG_POOLED, GapVariant.DIRECT_POOLED)


def run_family(family: str, params, repetitions: int, config: GapConfig, threads: int):
    print(f"Running {family} experiments...")
    print(f"  Parameters = {params}")
    print(f"  Repetitions = {repetitions}, B = {config.b}, K_max = {config.k_max}")

    start = time.time()
    reports = sweep(family, params, repetitions, config, VARIANTS, MASTER_SEED, threads)
    elapsed = time.time() - start

    summary_path = write_summary(reports, os.path.join(RESULTS_DIR, f"{family}_summary.csv"))
    traces_path = write_traces(reports, os.path.join(RESULTS_DIR, f"{family}_traces.json"))
    curves = pd.concat([mean_curve_frame(r) for r in reports], ignore_index=True)
    curves_path = os.path.join(RESULTS_DIR, f"{family}_mean_curves.csv")
    curves.to_csv(curves_path, index=False)

    print(f"\n=== Summary for {family} ===")
    print(f"{'param':<8} | {'variant':<15} | {'P(k=2)':<8} | {'modal':<6}")
    print("-" * 46)
    for report in reports:
        for variant in VARIANTS:
            frac = success_fraction(report, variant)
            modal = modal_selection(report, variant)
            print(f"{report.param:<8} | {variant.value:<15} | {frac:<8.2f} | {modal:<6}")
    print(f"Time: {elapsed:.1f}s")
    print(f"Saved {summary_path}, {traces_path}, {curves_path}")
    print("============================\n")
    return reports


def load_datasets():
    """(name, Dataset) pairs for the real datasets available locally."""
    datasets = []
    try:
        iris_path = write_iris_csv(os.path.join(RESULTS_DIR, "iris.csv"))
        datasets.append(("iris", load_csv(iris_path, has_header=True, label_column=4)))
    except ImportError:
        print("[WARN] scikit-learn not installed; Iris skipped.")
    if BREAST_CANCER_RAW.exists():
        prepared = prepare_breast_cancer(BREAST_CANCER_RAW, os.path.join(RESULTS_DIR, "breast_cancer.csv"))
        datasets.append(("breast_cancer", load_csv(prepared, has_header=True, label_column=9)))
    else:
        print(f"[WARN] {BREAST_CANCER_RAW} not found; Breast Cancer skipped.")
    return datasets


def run_datasets(config: GapConfig, threads: int):
    print("Running real-dataset experiments...")
    reports = []
    for name, data in load_datasets():
        start = time.time()
        report = run_dataset(name, data, config, ALL_VARIANTS, threads=threads)
        reports.append(report)
        print(f"  {name}: n = {data.n}, p = {data.p}, {time.time() - start:.1f}s")
        for variant in ALL_VARIANTS:
            print(f"    {variant.value:<15} modal k = {modal_selection(report, variant)}")
    if reports:
        path = write_summary(reports, os.path.join(RESULTS_DIR, "datasets_summary.csv"))
        print(f"Saved {path}\n")
    return reports


def main() -> None:
    parser = argparse.ArgumentParser(description="Desk-scale Gap statistic experiments")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads per experiment")
    parser.add_argument("--reps", type=int, default=BASE_REPETITIONS, help="Repetitions per parameter")
    parser.add_argument("--skip-unequal", action="store_true", help="Skip the n=1530 unequal-size runs")
    parser.add_argument("--skip-datasets", action="store_true", help="Skip the Iris and Breast Cancer runs")
    parser.add_argument("--verbose", action="store_true", help="Log progress to stderr")
    args = parser.parse_args()

    setup_logging(verbose=args.verbose)
    os.makedirs(RESULTS_DIR, exist_ok=True)

    config = GapConfig(metric=METRIC)
    run_family(OVERLAP, OVERLAP_DELTAS, args.reps, config, args.threads)
    run_family(DEGENERATE, DEGENERATE_DIMS, args.reps, config, args.threads)
    if args.skip_unequal:
        print("[INFO] Unequal-size experiments skipped.")
    else:
        unequal_config = GapConfig(b=UNEQUAL_B, metric=METRIC)
        run_family(UNEQUAL, UNEQUAL_ROWS, UNEQUAL_REPETITIONS, unequal_config, args.threads)
    if args.skip_datasets:
        print("[INFO] Real-dataset runs skipped.")
    else:
        run_datasets(config, args.threads)

    print("All experiments completed!")


if __name__ == "__main__":
    main()
