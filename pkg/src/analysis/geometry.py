"""
Closed-form and diagnostic companions of the Gap experiments.

- expected_rect_distance: closed-form expected Euclidean distance between two
  uniform points in an a x b rectangle (natural logarithms).
- feasible_ratio: for two normal clusters N(0, s^2 I), N((delta, 0), s^2 I)
  with size ratio m = N1/N2, whether each Gap variant can still pick k = 2.
  The null reference box is taken as (6s + delta) x 6s for k = 1 and
  ((6s + delta)/2) x 6s for k = 2.
- equal_distance_wk: W_k when every pairwise distance equals dist and the
  k clusters are balanced: (n/2 - k/2) * dist.
- distance_concentration: relative spread (max - min)/min of pairwise squared
  distances of uniform points, which shrinks as the dimension grows.
- w1_decomposition: W_1 versus W_2 + 2 N1 N2 d_delta / n for a two-cluster
  split; the identity is approximate, so the residual is reported.
- linear_tail: straight-line fit of W_k over the tail k >= k_from.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist

from clustering.dispersion import pooled_dispersion
from clustering.linkage import Partition
from clustering.metric import DistanceMatrix
from common.errors import InvalidK, InvalidScenario, NonPositiveSide, NotTwoClusters
from gap.streams import standard_normal

logger = logging.getLogger(__name__)

M_SCAN_MAX = 64
LOG = "log"
DIRECT = "direct"


@dataclass(frozen=True)
class RectSpec:
    a: float
    b: float

    def __post_init__(self):
        for side in (self.a, self.b):
            if not (math.isfinite(side) and side > 0):
                raise NonPositiveSide(f"rectangle sides must be finite and > 0, got {self.a} x {self.b}")

    @property
    def ordered(self) -> Tuple[float, float]:
        return (max(self.a, self.b), min(self.a, self.b))


@dataclass(frozen=True)
class UnequalSizeScenario:
    sigma: float = 1.0
    delta: float = 5.0
    n_total: int = 1530
    m: float = 1.0
    d_avg: Optional[float] = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidScenario(f"sigma must be > 0, got {self.sigma}")
        if not self.delta >= 0:
            raise InvalidScenario(f"delta must be >= 0, got {self.delta}")
        if self.n_total < 2:
            raise InvalidScenario(f"n_total must be >= 2, got {self.n_total}")
        if not self.m >= 1:
            raise InvalidScenario(f"m must be >= 1, got {self.m}")
        if self.d_avg is not None and not self.d_avg >= 0:
            raise InvalidScenario(f"d_avg must be >= 0, got {self.d_avg}")

    @property
    def rect_k1(self) -> RectSpec:
        return RectSpec(6 * self.sigma + self.delta, 6 * self.sigma)

    @property
    def rect_k2(self) -> RectSpec:
        return RectSpec((6 * self.sigma + self.delta) / 2, 6 * self.sigma)


@dataclass(frozen=True)
class FeasibilityResult:
    variant: str
    holds: bool
    max_m: int
    e_d1: float
    e_d2: float
    d_avg: float
    table: Dict[int, bool] = field(default_factory=dict)


# ---------------------------------------------------------------------
# Expected distance in a rectangle
# ---------------------------------------------------------------------

def expected_rect_distance(rect: RectSpec) -> float:
    """Mean distance of two independent uniform points in the rectangle."""
    a, b = rect.ordered
    d = math.hypot(a, b)
    bracket = (
        a ** 3 / b ** 2
        + b ** 3 / a ** 2
        + d * (3 - a ** 2 / b ** 2 - b ** 2 / a ** 2)
        + 2.5 * (b ** 2 / a * math.log((a + d) / b) + a ** 2 / b * math.log((b + d) / a))
    )
    return bracket / 15.0


def monte_carlo_rect_distance(rect: RectSpec, rng: np.random.Generator,
                              n_pairs: int = 1_000_000, chunk: int = 1_000_000) -> Tuple[float, float]:
    """(mean, standard error) of the distance of n_pairs uniform point pairs."""
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_pairs:
        size = min(chunk, n_pairs - done)
        dx = (rng.random(size) - rng.random(size)) * rect.a
        dy = (rng.random(size) - rng.random(size)) * rect.b
        dist = np.hypot(dx, dy)
        total += float(dist.sum())
        total_sq += float(np.dot(dist, dist))
        done += size
    mean = total / n_pairs
    var = max(total_sq / n_pairs - mean * mean, 0.0) * n_pairs / (n_pairs - 1)
    return mean, math.sqrt(var / n_pairs)


# ---------------------------------------------------------------------
# Unequal cluster sizes
# ---------------------------------------------------------------------

def estimate_d_avg(sigma: float, delta: float, rng: np.random.Generator, n_pairs: int = 200_000) -> float:
    """Monte Carlo mean Euclidean distance between a draw of each cluster."""
    z = standard_normal(rng, 4 * n_pairs).reshape(n_pairs, 4)
    dx = delta + sigma * (z[:, 2] - z[:, 0])
    dy = sigma * (z[:, 3] - z[:, 1])
    return float(np.hypot(dx, dy).mean())


def feasibility_inequality(m: float, d_avg: float, e_d1: float, e_d2: float,
                           sigma: float = 1.0, variant: str = LOG) -> bool:
    """
    log:    m d_avg / (sigma (m+1)^2) >= E(d1)/E(d2) - 1
    direct: 2 m d_avg / (m+1)^2      >= E(d1) - E(d2)
    """
    share = m / (m + 1.0) ** 2
    if variant == LOG:
        return share * d_avg / sigma >= e_d1 / e_d2 - 1.0
    if variant == DIRECT:
        return 2.0 * share * d_avg >= e_d1 - e_d2
    raise InvalidScenario(f"variant must be 'log' or 'direct', got {variant!r}")


def feasible_ratio(scn: UnequalSizeScenario, variant: str = LOG,
                   rng: Optional[np.random.Generator] = None) -> FeasibilityResult:
    """
    Check the size-ratio inequality at scn.m and scan m = 1..64 for the
    largest integer ratio that still satisfies it (0 when none does).

    d_avg comes from the scenario; it is only estimated by Monte Carlo when
    the scenario leaves it unset and an rng is passed explicitly.

    Raises:
        InvalidScenario: unknown variant, or no d_avg and no rng.
    """
    if variant not in (LOG, DIRECT):
        raise InvalidScenario(f"variant must be 'log' or 'direct', got {variant!r}")
    d_avg = scn.d_avg
    if d_avg is None:
        if rng is None:
            raise InvalidScenario("d_avg not given; pass it or an rng to estimate it")
        d_avg = estimate_d_avg(scn.sigma, scn.delta, rng)
        logger.info("estimated d_avg = %.4f by Monte Carlo", d_avg)

    e_d1 = expected_rect_distance(scn.rect_k1)
    e_d2 = expected_rect_distance(scn.rect_k2)
    table = {m: feasibility_inequality(m, d_avg, e_d1, e_d2, scn.sigma, variant)
             for m in range(1, M_SCAN_MAX + 1)}
    max_m = max((m for m, ok in table.items() if ok), default=0)
    holds = feasibility_inequality(scn.m, d_avg, e_d1, e_d2, scn.sigma, variant)
    return FeasibilityResult(variant, holds, max_m, e_d1, e_d2, float(d_avg), table)


# ---------------------------------------------------------------------
# High-dimensional behaviour
# ---------------------------------------------------------------------

def equal_distance_wk(n: int, k: int, dist: float) -> float:
    """W_k for n points at common pairwise distance dist split into k equal clusters."""
    if not 1 <= k <= n:
        raise InvalidK(f"k must be in [1, {n}], got {k}")
    return (n / 2.0 - k / 2.0) * dist


def distance_concentration(p: int, n: int, rng) -> float:
    """
    (max - min) / min of the pairwise squared distances of n points drawn
    from U[0, 1]^p. rng only needs a random(shape) method.
    """
    if n < 2 or p < 1:
        raise InvalidScenario(f"need n >= 2 and p >= 1, got n={n}, p={p}")
    points = np.asarray(rng.random((n, p)), dtype=np.float64).reshape(n, p)
    dist = pdist(points, metric="sqeuclidean")
    lo, hi = float(dist.min()), float(dist.max())
    if hi == lo:
        return 0.0
    if lo == 0.0:
        return math.inf
    return (hi - lo) / lo


@dataclass(frozen=True)
class W1Decomposition:
    w1: float
    w2: float
    d_delta: float
    cross_term: float
    residual: float


def w1_decomposition(part: Partition, dm: DistanceMatrix) -> W1Decomposition:
    """Compare W_1 with W_2 plus the cross-cluster term 2 N1 N2 d_delta / n."""
    if part.k != 2:
        raise NotTwoClusters(f"need a two-cluster partition, got k={part.k}")
    n = part.n
    w1 = pooled_dispersion(Partition(np.zeros(n, dtype=np.int64), 1), dm)
    w2 = pooled_dispersion(part, dm)
    first, second = part.members(0), part.members(1)
    d_delta = float(dm.d[np.ix_(first, second)].mean())
    cross = 2.0 * first.size * second.size * d_delta / n
    return W1Decomposition(w1, w2, d_delta, cross, w1 - w2 - cross)


def linear_tail(w: Sequence[float], k_from: int = 3) -> Dict[str, float]:
    """
    Least-squares line through (k, W_k) for k >= k_from (k is 1-based).
    With equal pairwise distances the slope is -dist/2.
    """
    w = np.asarray(w, dtype=np.float64)
    ks = np.arange(1, w.size + 1)
    mask = ks >= k_from
    if mask.sum() < 2:
        raise InvalidK(f"need at least two points with k >= {k_from}")
    slope, intercept = np.polyfit(ks[mask], w[mask], 1)
    residual = w[mask] - (slope * ks[mask] + intercept)
    return {"slope": float(slope), "intercept": float(intercept),
            "max_residual": float(np.abs(residual).max())}
