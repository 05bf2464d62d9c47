"""
benchmark.py - Performance Benchmark for the Gap statistic pipeline

Times estimate_clusters (distances, average linkage, B reference
datasets, selection) on two well separated Gaussian clusters for
n = 100, 250, 500 and 1,000. Outputs a performance table and saves it to
results/benchmark.csv.
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

import numpy as np
import pandas as pd

from data_io.dataset_io import Dataset
from gap.gapstat import GapConfig, estimate_clusters
from gap.streams import derive_rng, normal

SIZES = [100, 250, 500, 1_000]
B = 10
THREADS = [1, 4]
RESULTS_PATH = os.path.join("results", "benchmark.csv")


def two_clusters(n: int) -> Dataset:
    rng = derive_rng(42, n)
    half = n // 2
    first = normal(rng, 0.0, 1.0, (half, 2))
    second = normal(rng, 5.0, 1.0, (n - half, 2))
    return Dataset(np.vstack([first, second]))


def run_benchmark(n: int, threads: int):
    data = two_clusters(n)
    config = GapConfig(b=B, seed=42, threads=threads)
    start = time.time()
    result = estimate_clusters(data, config)
    runtime = time.time() - start
    return runtime, result.selection.label


def main():
    print("\nRunning Benchmarks...")
    print("=" * 60)
    print(f"{'N':<12} | {'Threads':<8} | {'Time (s)':<12} | {'Selected k':<10}")
    print("-" * 60)

    rows = []
    for n in SIZES:
        for threads in THREADS:
            runtime, label = run_benchmark(n, threads)
            print(f"{n:<12,} | {threads:<8} | {runtime:<12.4f} | {label:<10}")
            rows.append({"n": n, "threads": threads, "b": B, "seconds": runtime, "selected_k": label})

    print("=" * 60)
    os.makedirs("results", exist_ok=True)
    pd.DataFrame(rows).to_csv(RESULTS_PATH, index=False)
    print(f"Benchmark Complete. Saved {RESULTS_PATH}\n")


if __name__ == "__main__":
    main()
