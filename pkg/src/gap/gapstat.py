"""
Gap statistic: reference sampling, the four Gap variants, simulation error
and the smallest-k selection rule.

Variants (dispersion x scale):
    log-pooled       Gap(k)  = mean_b log W*_kb - log W_k
    direct-pooled    Gap*(k) = mean_b W*_kb     - W_k
    log-weighted     as log-pooled on W'_k
    direct-weighted  as direct-pooled on W'_k

Simulation error:
    s_k = sqrt(1 + 1/B) * sd_k, sd_k the standard deviation (divisor B by
    default, B - 1 with sd_ddof=1) of log W*_kb for log variants and of
    W*_kb for direct variants.

Selection:
    smallest k in 1..K_max-1 with Gap(k) >= Gap(k+1) - s_{k+1}; when no k
    qualifies the result is undefined ("nd").

Reference data:
    uniform over the observed per-feature range. Replicate b draws from
    streams.derive_rng(config.seed, b), so replicates can run on a thread
    pool and are merged by index: results do not depend on config.threads.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from clustering.dispersion import KINDS, POOLED, WEIGHTED, DispersionCurve, dispersion_curve
from clustering.linkage import MergeTree, Partition, average_linkage, cut_tree
from clustering.metric import SQEUCLIDEAN, DistanceMatrix, check_metric, pairwise_matrix
from common.errors import (
    DegenerateDispersion,
    DimensionMismatch,
    GapToolkitError,
    InvalidConfig,
    NonPositiveDispersion,
    NumericalError,
)
from data_io.dataset_io import Dataset, FeatureRanges, feature_ranges
from .streams import derive_rng

logger = logging.getLogger(__name__)

DEFAULT_B = 50
DEFAULT_K_MAX = 10
DEFAULT_SEED = 42

ND = "nd"


class GapVariant(str, Enum):
    LOG_POOLED = "log-pooled"
    DIRECT_POOLED = "direct-pooled"
    LOG_WEIGHTED = "log-weighted"
    DIRECT_WEIGHTED = "direct-weighted"

    @property
    def is_log(self) -> bool:
        return self.value.startswith("log")

    @property
    def dispersion(self) -> str:
        return POOLED if self.value.endswith("pooled") else WEIGHTED

    @classmethod
    def parse(cls, name: Union[str, "GapVariant"]) -> "GapVariant":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(v.value for v in cls)
            raise InvalidConfig(f"unknown Gap variant {name!r}; choose one of {choices}") from None


@dataclass(frozen=True)
class GapConfig:
    """Settings of one Gap statistic run. k_max < n is checked against the data."""
    k_max: int = DEFAULT_K_MAX
    b: int = DEFAULT_B
    variant: GapVariant = GapVariant.LOG_POOLED
    seed: int = DEFAULT_SEED
    metric: str = SQEUCLIDEAN
    sd_ddof: int = 0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", GapVariant.parse(self.variant))
        if int(self.k_max) < 2:
            raise InvalidConfig(f"k_max must be >= 2, got {self.k_max}")
        if int(self.b) < 2:
            raise InvalidConfig(f"B must be >= 2, got {self.b}")
        if self.sd_ddof not in (0, 1):
            raise InvalidConfig(f"sd_ddof must be 0 or 1, got {self.sd_ddof}")
        if int(self.threads) < 1:
            raise InvalidConfig(f"threads must be >= 1, got {self.threads}")
        try:
            check_metric(self.metric)
        except GapToolkitError as exc:
            raise InvalidConfig(str(exc)) from None

    def with_variant(self, variant: Union[str, GapVariant]) -> "GapConfig":
        return GapConfig(self.k_max, self.b, GapVariant.parse(variant), self.seed,
                         self.metric, self.sd_ddof, self.threads)

    def as_dict(self) -> dict:
        return {
            "k_max": int(self.k_max),
            "b": int(self.b),
            "variant": self.variant.value,
            "seed": int(self.seed),
            "metric": self.metric,
            "sd_ddof": int(self.sd_ddof),
        }


@dataclass(frozen=True)
class ReferenceEnsemble:
    """w_star[b, k-1] = dispersion of reference replicate b at k."""
    w_star: np.ndarray
    dispersion: str = POOLED

    @property
    def b(self) -> int:
        return int(self.w_star.shape[0])

    @property
    def k_max(self) -> int:
        return int(self.w_star.shape[1])


@dataclass(frozen=True)
class GapCurve:
    variant: GapVariant
    k: np.ndarray
    w: np.ndarray
    e_star: np.ndarray
    gap: np.ndarray
    s: np.ndarray

    @property
    def k_max(self) -> int:
        return int(self.k.size)


@dataclass(frozen=True)
class SelectionResult:
    """selected_k is None when no k satisfies the rule; rule_trace[k-1] is the test at k."""
    selected_k: Optional[int]
    rule_trace: List[bool]

    @property
    def label(self) -> str:
        return ND if self.selected_k is None else str(self.selected_k)


@dataclass(frozen=True)
class EstimateResult:
    config: GapConfig
    curve: GapCurve
    selection: SelectionResult
    partition: Optional[Partition]
    dispersion: DispersionCurve = field(repr=False)
    ensemble: ReferenceEnsemble = field(repr=False)
    tree: MergeTree = field(repr=False)


# ---------------------------------------------------------------------
# Reference sampling
# ---------------------------------------------------------------------

def sample_reference(ranges: FeatureRanges, n: int, rng: np.random.Generator) -> Dataset:
    """n rows, feature j uniform on [mins[j], maxs[j]]; zero-width features stay constant."""
    u = rng.random((int(n), ranges.mins.size))
    return Dataset(ranges.mins + u * ranges.widths)


TreeBuilder = Callable[[DistanceMatrix], MergeTree]
Evaluator = Callable[[Dataset, DistanceMatrix, MergeTree, int], np.ndarray]


def _kind_evaluator(kind: str) -> Evaluator:
    def evaluate(ref: Dataset, dm: DistanceMatrix, tree: MergeTree, k_max: int) -> np.ndarray:
        return dispersion_curve(ref, dm, tree, k_max, kind, require_positive=False).w
    return evaluate


def _reference_matrices(
    data: Dataset,
    config: GapConfig,
    evaluators: Dict[str, Evaluator],
    tree_builder: TreeBuilder = average_linkage,
) -> Dict[str, np.ndarray]:
    """B x K_max reference dispersions for each requested evaluator, sharing the reference trees."""
    box = feature_ranges(data)
    n, b_total, k_max = data.n, int(config.b), int(config.k_max)

    def replicate(b: int) -> Dict[str, np.ndarray]:
        ref = sample_reference(box, n, derive_rng(config.seed, b))
        dm = pairwise_matrix(ref, config.metric)
        tree = tree_builder(dm)
        out = {name: np.asarray(fn(ref, dm, tree, k_max), dtype=np.float64)
               for name, fn in evaluators.items()}
        logger.debug("reference replicate %d/%d done", b + 1, b_total)
        return out

    workers = min(int(config.threads), b_total)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(replicate, range(b_total)))
    else:
        rows = [replicate(b) for b in range(b_total)]

    matrices = {}
    for name in evaluators:
        m = np.vstack([row[name] for row in rows])
        m.setflags(write=False)
        matrices[name] = m
    return matrices


def _guard_positive(w_star: np.ndarray) -> None:
    bad = np.argwhere(w_star <= 0.0)
    if bad.size:
        b, k = bad[0]
        raise DegenerateDispersion(int(k) + 1, f"reference replicate {int(b)} has zero dispersion at k={int(k) + 1}")


def reference_ensemble(
    data: Dataset,
    config: GapConfig,
    tree_builder: TreeBuilder = average_linkage,
    evaluator: Optional[Evaluator] = None,
) -> ReferenceEnsemble:
    """
    Cluster B uniform reference datasets and record their dispersion curves.

    Args:
        tree_builder: distance matrix -> MergeTree (average linkage by default).
        evaluator: (reference data, dm, tree, k_max) -> K_max dispersions;
            defaults to the config variant's dispersion along the tree cuts.

    Raises:
        DegenerateDispersion: a reference dispersion is zero under a log variant.
    """
    kind = config.variant.dispersion
    fn = evaluator or _kind_evaluator(kind)
    w_star = _reference_matrices(data, config, {kind: fn}, tree_builder)[kind]
    if config.variant.is_log:
        _guard_positive(w_star)
    return ReferenceEnsemble(w_star, kind)


# ---------------------------------------------------------------------
# Gap curve and selection
# ---------------------------------------------------------------------

def simulation_error(column: Iterable[float], variant: Union[str, GapVariant], ddof: int = 0) -> float:
    """
    s_k = sqrt(1 + 1/B) * sd over the B reference values at k
    (taken on the log scale for log variants).
    """
    variant = GapVariant.parse(variant)
    values = np.asarray(list(column), dtype=np.float64)
    b = values.size
    if b < 2:
        raise InvalidConfig(f"simulation error needs B >= 2 values, got {b}")
    if variant.is_log:
        values = np.log(values)
    return float(math.sqrt(1.0 + 1.0 / b) * np.std(values, ddof=ddof))


def gap_curve(
    w: DispersionCurve,
    ens: ReferenceEnsemble,
    variant: Union[str, GapVariant],
    sd_ddof: int = 0,
) -> GapCurve:
    """
    Gap values and simulation errors for k = 1..K_max.

    Raises:
        DimensionMismatch: curve and ensemble disagree on K_max.
        NonPositiveDispersion: log variant with some W_k <= 0.
    """
    variant = GapVariant.parse(variant)
    if w.k_max != ens.k_max:
        raise DimensionMismatch(f"data curve has K_max={w.k_max}, ensemble has {ens.k_max}")

    data_w = np.asarray(w.w, dtype=np.float64)
    w_star = ens.w_star
    if variant.is_log:
        bad = np.flatnonzero(data_w <= 0.0)
        if bad.size:
            k = int(bad[0]) + 1
            raise NonPositiveDispersion(k, float(data_w[k - 1]))
        _guard_positive(w_star)
        e_star = np.log(w_star).mean(axis=0)
        gap = e_star - np.log(data_w)
    else:
        e_star = w_star.mean(axis=0)
        gap = e_star - data_w

    s = np.array([simulation_error(w_star[:, j], variant, sd_ddof) for j in range(ens.k_max)])
    k = np.arange(1, ens.k_max + 1)
    return GapCurve(variant, k, data_w.copy(), e_star, gap, s)


def select_k(curve: GapCurve) -> SelectionResult:
    """Smallest k with gap[k] >= gap[k+1] - s[k+1], or undefined."""
    if curve.k_max < 2:
        raise InvalidConfig("selection needs K_max >= 2")
    gap, s = curve.gap, curve.s
    trace = [bool(gap[i] >= gap[i + 1] - s[i + 1]) for i in range(curve.k_max - 1)]
    selected = next((i + 1 for i, ok in enumerate(trace) if ok), None)
    return SelectionResult(selected, trace)


# ---------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------

def estimate_many(
    data: Dataset,
    config: GapConfig,
    variants: Iterable[Union[str, GapVariant]],
    raise_errors: bool = True,
) -> Dict[GapVariant, Union[EstimateResult, NumericalError]]:
    """
    Run several Gap variants on one dataset, sharing the distance matrix,
    the data tree and the reference trees. Each entry equals what
    estimate_clusters returns for that variant (same config otherwise).

    With raise_errors=False a variant that fails numerically maps to its
    exception instead of a result.
    """
    variants = [GapVariant.parse(v) for v in variants]
    if int(config.k_max) >= data.n:
        raise InvalidConfig(f"k_max must be < n = {data.n}, got {config.k_max}")

    dm = pairwise_matrix(data, config.metric, threads=config.threads)
    tree = average_linkage(dm)
    kinds = [kind for kind in KINDS if any(v.dispersion == kind for v in variants)]

    curves = {kind: dispersion_curve(data, dm, tree, config.k_max, kind, require_positive=False)
              for kind in kinds}
    references = _reference_matrices(data, config, {kind: _kind_evaluator(kind) for kind in kinds})

    results: Dict[GapVariant, Union[EstimateResult, NumericalError]] = {}
    for variant in variants:
        kind = variant.dispersion
        try:
            if variant.is_log:
                zero = np.flatnonzero(curves[kind].w <= 0.0)
                if zero.size and kind == POOLED:
                    raise DegenerateDispersion(int(zero[0]) + 1)
                _guard_positive(references[kind])
            ens = ReferenceEnsemble(references[kind], kind)
            curve = gap_curve(curves[kind], ens, variant, config.sd_ddof)
        except NumericalError as exc:
            if raise_errors:
                raise
            logger.info("%s failed: %s", variant.value, exc)
            results[variant] = exc
            continue

        selection = select_k(curve)
        partition = cut_tree(tree, selection.selected_k) if selection.selected_k else None
        logger.info("%s selected k=%s", variant.value, selection.label)
        results[variant] = EstimateResult(
            config.with_variant(variant), curve, selection, partition, curves[kind], ens, tree,
        )
    return results


def estimate_clusters(data: Dataset, config: GapConfig) -> EstimateResult:
    """
    distances -> average linkage -> dispersion curve -> reference ensemble
    -> gap curve -> selection, returning every intermediate.
    """
    return estimate_many(data, config, [config.variant])[config.variant]


# ---------------------------------------------------------------------
# Helpers for the log/direct comparison and plot data
# ---------------------------------------------------------------------

def implication_preconditions(w_k: float, w_k1: float, geo_k: float, geo_k1: float,
                              arith_k: float, arith_k1: float) -> bool:
    """
    Conditions under which a log-Gap candidate at k is also a direct-Gap
    candidate: W_k > W_{k+1} > 0, both reference means decrease from k to
    k+1, and each exceeds the matching data dispersion.
    """
    return (w_k > w_k1 > 0
            and geo_k > geo_k1 and arith_k > arith_k1
            and geo_k > w_k and arith_k > w_k
            and geo_k1 > w_k1 and arith_k1 > w_k1)


def curve_frame(curve: GapCurve) -> pd.DataFrame:
    """Plot data: one row per k."""
    log_w = np.where(curve.w > 0, np.log(np.where(curve.w > 0, curve.w, 1.0)), np.nan)
    return pd.DataFrame({
        "k": curve.k,
        "w": curve.w,
        "log_w": log_w,
        "e_star": curve.e_star,
        "gap": curve.gap,
        "s": curve.s,
    })
