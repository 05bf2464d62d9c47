"""
Batch execution of the simulation families and frequency aggregation.

Streams per repetition r of an experiment with master seed S:
    data        derive_rng(S, r, 0)   (overlap, degenerate)
                derive_seed(S, r, 0)  as the shared pool seed (unequal)
    references  GapConfig.seed = derive_seed(S, r, 1)

Fixed datasets (run_dataset) repeat only the reference ensemble, with
GapConfig.seed taken from a list of seeds.

Repetitions may run on a thread pool; traces are stored by repetition
index, so a report never depends on scheduling.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from common.errors import DegenerateDispersion, HeterogeneousReports, InvalidExperiment
from data_io.dataset_io import Dataset
from gap.gapstat import ND, GapConfig, GapVariant, estimate_many
from gap.streams import derive_rng, derive_seed
from .generators import SIZE_ROWS, gen_degenerate, gen_overlap, gen_unequal

logger = logging.getLogger(__name__)

OVERLAP = "overlap"
UNEQUAL = "unequal"
DEGENERATE = "degenerate"
FAMILIES = (OVERLAP, UNEQUAL, DEGENERATE)

BUCKET_TEN = "≥10"
BUCKETS = [str(k) for k in range(1, 10)] + [BUCKET_TEN, ND]
DEFAULT_VARIANTS = (GapVariant.LOG_POOLED, GapVariant.DIRECT_POOLED)
ALL_VARIANTS = tuple(GapVariant)
DATASET_SEEDS = tuple(range(10))

PathLike = Union[str, Path]


@dataclass(frozen=True)
class ExperimentSpec:
    """
    family: overlap (param = delta), unequal (param = size row),
    degenerate (param = dimension p).
    """
    family: str
    param: float
    repetitions: int = 50
    config: GapConfig = field(default_factory=GapConfig)
    variants: Sequence[GapVariant] = DEFAULT_VARIANTS
    master_seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidExperiment(f"unknown family {self.family!r}; choose one of {', '.join(FAMILIES)}")
        if int(self.repetitions) < 1:
            raise InvalidExperiment(f"repetitions must be >= 1, got {self.repetitions}")
        if self.family == OVERLAP and not self.param >= 0:
            raise InvalidExperiment(f"overlap delta must be >= 0, got {self.param}")
        if self.family == UNEQUAL and self.param not in SIZE_ROWS:
            raise InvalidExperiment(f"unequal row must be one of {sorted(SIZE_ROWS)}, got {self.param}")
        if self.family == DEGENERATE and (int(self.param) != self.param or self.param < 2):
            raise InvalidExperiment(f"degenerate dimension must be an integer >= 2, got {self.param}")
        variants = tuple(GapVariant.parse(v) for v in self.variants)
        if not variants:
            raise InvalidExperiment("at least one Gap variant is required")
        object.__setattr__(self, "variants", variants)


@dataclass(frozen=True)
class RepetitionTrace:
    repetition: int
    gap_seed: int
    selected: Dict[str, Union[int, str]]
    degenerate: Dict[str, bool]


@dataclass
class ExperimentReport:
    family: str
    param: float
    k_max: int
    repetitions: int
    counts: Dict[str, Counter]
    traces: List[RepetitionTrace]
    mean_gap: Dict[str, List[float]]
    mean_w: Dict[str, List[float]]


def bucket(selected: Union[int, str]) -> str:
    if selected == ND:
        return ND
    return BUCKET_TEN if int(selected) >= 10 else str(int(selected))


def generate(spec: ExperimentSpec, repetition: int) -> Dataset:
    if spec.family == OVERLAP:
        return gen_overlap(float(spec.param), derive_rng(spec.master_seed, repetition, 0))
    if spec.family == UNEQUAL:
        return gen_unequal(int(spec.param), derive_seed(spec.master_seed, repetition, 0))
    return gen_degenerate(int(spec.param), derive_rng(spec.master_seed, repetition, 0))


def _estimate(data: Dataset, config: GapConfig, variants: Sequence[GapVariant], repetition: int):
    results = estimate_many(data, config, variants, raise_errors=False)

    selected, flags, curves = {}, {}, {}
    for variant, result in results.items():
        name = variant.value
        if isinstance(result, Exception):
            selected[name] = ND
            flags[name] = isinstance(result, DegenerateDispersion)
            continue
        selected[name] = result.selection.selected_k if result.selection.selected_k else ND
        flags[name] = False
        curves[name] = (result.curve.gap, result.curve.w)
    logger.debug("repetition %d: %s", repetition, selected)
    return RepetitionTrace(repetition, int(config.seed), selected, flags), curves


def _run_repetition(spec: ExperimentSpec, repetition: int, inner_threads: int):
    data = generate(spec, repetition)
    config = replace(spec.config, seed=derive_seed(spec.master_seed, repetition, 1), threads=inner_threads)
    return _estimate(data, config, spec.variants, repetition)


def _map_repetitions(run_one, count: int, threads: int) -> list:
    workers = max(1, min(int(threads), count))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_one, range(count)))
    return [run_one(r) for r in range(count)]


def _aggregate(family: str, param: float, k_max: int, names: Sequence[str], outcomes) -> ExperimentReport:
    counts = {name: Counter() for name in names}
    gap_sums = {name: [] for name in names}
    w_sums = {name: [] for name in names}
    traces = []
    for trace, curves in outcomes:
        traces.append(trace)
        for name in names:
            counts[name][bucket(trace.selected[name])] += 1
            if name in curves:
                gap_sums[name].append(curves[name][0])
                w_sums[name].append(curves[name][1])

    def mean_of(stack):
        return [float(v) for v in np.mean(stack, axis=0)] if stack else []

    report = ExperimentReport(
        family=family,
        param=param,
        k_max=int(k_max),
        repetitions=len(traces),
        counts=counts,
        traces=traces,
        mean_gap={name: mean_of(gap_sums[name]) for name in names},
        mean_w={name: mean_of(w_sums[name]) for name in names},
    )
    logger.info("%s(%s): %s", family, param, {name: dict(counts[name]) for name in names})
    return report


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentReport:
    """
    Generate spec.repetitions datasets, run every requested variant on each
    and tally the selected k. Repetitions ending in a numerical failure are
    tallied as "nd" with the degenerate flag set.
    """
    reps = int(spec.repetitions)
    inner = spec.config.threads if max(1, min(int(threads), reps)) == 1 else 1
    outcomes = _map_repetitions(lambda r: _run_repetition(spec, r, inner), reps, threads)
    names = [v.value for v in spec.variants]
    return _aggregate(spec.family, spec.param, spec.config.k_max, names, outcomes)


def run_dataset(name: str, data: Dataset, config: GapConfig,
                variants: Sequence[GapVariant] = ALL_VARIANTS,
                seeds: Sequence[int] = DATASET_SEEDS, threads: int = 1) -> ExperimentReport:
    """
    Run every variant on one fixed dataset once per reference seed and tally
    the selected k. The report's family is the dataset name and its param
    the number of observations; repetition i used GapConfig.seed = seeds[i].
    """
    variants = tuple(GapVariant.parse(v) for v in variants)
    seeds = [int(s) for s in seeds]
    if not variants or not seeds:
        raise InvalidExperiment("a dataset run needs at least one variant and one seed")
    inner = config.threads if max(1, min(int(threads), len(seeds))) == 1 else 1

    def run_one(i: int):
        return _estimate(data, replace(config, seed=seeds[i], threads=inner), variants, i)

    outcomes = _map_repetitions(run_one, len(seeds), threads)
    return _aggregate(name, float(data.n), config.k_max, [v.value for v in variants], outcomes)


def sweep(family: str, params: Iterable[float], repetitions: int, config: GapConfig,
          variants: Sequence[GapVariant] = DEFAULT_VARIANTS, master_seed: int = 0,
          threads: int = 1) -> List[ExperimentReport]:
    """One report per parameter value, all with the same master seed."""
    return [
        run_experiment(ExperimentSpec(family, param, repetitions, config, variants, master_seed), threads)
        for param in params
    ]


def success_fraction(report: ExperimentReport, variant: Union[str, GapVariant], k: int = 2) -> float:
    name = GapVariant.parse(variant).value
    return report.counts[name][bucket(k)] / report.repetitions


def modal_selection(report: ExperimentReport, variant: Union[str, GapVariant]) -> str:
    """Most frequent bucket; ties go to the earlier bucket."""
    name = GapVariant.parse(variant).value
    counts = report.counts[name]
    return max(BUCKETS, key=lambda b: (counts[b], -BUCKETS.index(b)))


def summarize(reports: Sequence[ExperimentReport]) -> pd.DataFrame:
    """
    Frequency table: one row per (family, param, variant), count columns per
    bucket followed by percentage columns. Reports with the same family and
    parameter are merged by adding counts.

    Raises:
        HeterogeneousReports: reports with different K_max.
    """
    if not reports:
        return pd.DataFrame(columns=["family", "param", "variant", "repetitions"] + BUCKETS)
    k_values = {r.k_max for r in reports}
    if len(k_values) > 1:
        raise HeterogeneousReports(f"reports mix K_max values {sorted(k_values)}")

    merged: Dict[tuple, Counter] = {}
    totals: Dict[tuple, int] = {}
    for report in reports:
        for name, counts in report.counts.items():
            key = (report.family, report.param, name)
            merged.setdefault(key, Counter()).update(counts)
            totals[key] = totals.get(key, 0) + report.repetitions

    rows = []
    for key, counts in merged.items():
        family, param, name = key
        row = {"family": family, "param": param, "variant": name, "repetitions": totals[key]}
        for b in BUCKETS:
            row[b] = int(counts[b])
        for b in BUCKETS:
            row[f"pct_{b}"] = 100.0 * counts[b] / totals[key]
        rows.append(row)
    return pd.DataFrame(rows)


def write_summary(reports: Sequence[ExperimentReport], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summarize(reports).to_csv(path, index=False)
    return path


def traces_dict(report: ExperimentReport) -> dict:
    return {
        "family": report.family,
        "param": report.param,
        "k_max": report.k_max,
        "repetitions": report.repetitions,
        "mean_gap": report.mean_gap,
        "mean_w": report.mean_w,
        "traces": [
            {
                "repetition": t.repetition,
                "gap_seed": t.gap_seed,
                "selected": t.selected,
                "degenerate": t.degenerate,
            }
            for t in report.traces
        ],
    }


def write_traces(reports: Sequence[ExperimentReport], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = [traces_dict(r) for r in reports]
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def mean_curve_frame(report: ExperimentReport) -> pd.DataFrame:
    """Plot data of the average Gap and W_k curves per variant (long format)."""
    rows = []
    for name, gaps in report.mean_gap.items():
        for k, (g, w) in enumerate(zip(gaps, report.mean_w[name]), start=1):
            rows.append({"family": report.family, "param": report.param, "variant": name,
                         "k": k, "mean_gap": g, "mean_w": w})
    return pd.DataFrame(rows, columns=["family", "param", "variant", "k", "mean_gap", "mean_w"])

