"""
Tests for the rectangle distance formula, the size-ratio feasibility check,
the equal-distance W_k model, distance concentration and the W_1
decomposition.

Run with pytest from the repository root, or directly:
    python3 src/analysis/run_tests.py
"""

import math

import numpy as np
import pytest

from analysis.geometry import (
    DIRECT,
    LOG,
    M_SCAN_MAX,
    RectSpec,
    UnequalSizeScenario,
    distance_concentration,
    equal_distance_wk,
    estimate_d_avg,
    expected_rect_distance,
    feasibility_inequality,
    feasible_ratio,
    linear_tail,
    monte_carlo_rect_distance,
    w1_decomposition,
)
from clustering.dispersion import pooled_dispersion
from clustering.linkage import Partition
from clustering.metric import DistanceMatrix, pairwise_matrix
from common.errors import InvalidK, InvalidScenario, NonPositiveSide, NotTwoClusters
from data_io.dataset_io import Dataset
from gap.streams import derive_rng

REPORTED_D_AVG = 3.48


class FixedPoints:
    """Stands in for a generator: random() returns preset points."""

    def __init__(self, points):
        self.points = np.asarray(points, dtype=float)

    def random(self, shape):
        return self.points.reshape(shape)


def equidistant(n: int, dist: float = 1.0) -> DistanceMatrix:
    return DistanceMatrix(dist * (np.ones((n, n)) - np.eye(n)))


# ------------------ expected rectangle distance ------------------
def test_unit_square():
    closed_form = (2 + math.sqrt(2) + 5 * math.log(1 + math.sqrt(2))) / 15
    assert expected_rect_distance(RectSpec(1, 1)) == pytest.approx(closed_form, rel=1e-14)
    assert expected_rect_distance(RectSpec(1, 1)) == pytest.approx(0.5214054, abs=1e-6)


def test_side_order_does_not_matter():
    assert expected_rect_distance(RectSpec(2, 1)) == expected_rect_distance(RectSpec(1, 2))
    assert expected_rect_distance(RectSpec(11, 6)) == expected_rect_distance(RectSpec(6, 11))


def test_reference_box_constants():
    assert expected_rect_distance(RectSpec(11, 6)) == pytest.approx(4.53, abs=0.02)
    assert expected_rect_distance(RectSpec(6, 5.5)) == pytest.approx(2.99, abs=0.02)


@pytest.mark.parametrize("a, b", [(0, 1), (-1, 2), (1, math.inf), (math.nan, 1)])
def test_bad_sides(a, b):
    with pytest.raises(NonPositiveSide):
        RectSpec(a, b)


def test_formula_matches_monte_carlo():
    sides = derive_rng(31).uniform(0.1, 20.0, size=(20, 2))
    for index, (a, b) in enumerate(sides):
        rect = RectSpec(float(a), float(b))
        mean, se = monte_carlo_rect_distance(rect, derive_rng(32, index), n_pairs=1_000_000)
        assert abs(expected_rect_distance(rect) - mean) <= 3 * se


def test_monte_carlo_chunks_agree():
    rect = RectSpec(3.0, 2.0)
    whole = monte_carlo_rect_distance(rect, derive_rng(1), n_pairs=10_000, chunk=10_000)
    assert whole[1] > 0
    split = monte_carlo_rect_distance(rect, derive_rng(1), n_pairs=10_000, chunk=2_500)
    assert split[0] == pytest.approx(expected_rect_distance(rect), abs=6 * split[1])


# ------------------ size-ratio feasibility ------------------
def test_scenario_rectangles():
    scn = UnequalSizeScenario(sigma=1.0, delta=5.0)
    assert scn.rect_k1 == RectSpec(11.0, 6.0)
    assert scn.rect_k2 == RectSpec(5.5, 6.0)


@pytest.mark.parametrize("kwargs", [
    {"sigma": 0.0}, {"delta": -1.0}, {"n_total": 1}, {"m": 0.5}, {"d_avg": -0.1},
])
def test_scenario_validation(kwargs):
    with pytest.raises(InvalidScenario):
        UnequalSizeScenario(**kwargs)


def test_inequalities_with_reported_constants():
    for variant in (LOG, DIRECT):
        assert feasibility_inequality(1, REPORTED_D_AVG, 4.53, 2.99, 1.0, variant)
        assert not feasibility_inequality(16, REPORTED_D_AVG, 4.53, 2.99, 1.0, variant)
    with pytest.raises(InvalidScenario):
        feasibility_inequality(1, REPORTED_D_AVG, 4.53, 2.99, 1.0, "squared")


def test_feasible_ratio_scan():
    log = feasible_ratio(UnequalSizeScenario(m=1, d_avg=REPORTED_D_AVG), LOG)
    assert log.holds
    assert log.max_m == 4
    assert log.e_d1 == pytest.approx(4.53, abs=0.02)
    assert log.e_d2 == pytest.approx(2.99, abs=0.02)
    assert len(log.table) == M_SCAN_MAX

    direct = feasible_ratio(UnequalSizeScenario(m=1, d_avg=REPORTED_D_AVG), DIRECT)
    assert direct.holds
    assert direct.max_m in (1, 2)

    assert not feasible_ratio(UnequalSizeScenario(m=16, d_avg=REPORTED_D_AVG), LOG).holds
    assert not feasible_ratio(UnequalSizeScenario(m=16, d_avg=REPORTED_D_AVG), DIRECT).holds


def test_feasible_ratio_fails_once_then_always():
    for variant in (LOG, DIRECT):
        table = feasible_ratio(UnequalSizeScenario(d_avg=REPORTED_D_AVG), variant).table
        first_fail = next(m for m, ok in table.items() if not ok)
        assert not any(table[m] for m in range(first_fail, M_SCAN_MAX + 1))


def test_coincident_clusters_never_feasible():
    for variant in (LOG, DIRECT):
        result = feasible_ratio(UnequalSizeScenario(d_avg=0.0), variant)
        assert result.max_m == 0
        assert not any(result.table.values())


def test_d_avg_needs_value_or_generator():
    with pytest.raises(InvalidScenario):
        feasible_ratio(UnequalSizeScenario(), LOG)
    result = feasible_ratio(UnequalSizeScenario(), LOG, rng=derive_rng(4))
    # mean length of N((5, 0), 2 I) is a little above 5
    assert 5.0 < result.d_avg < 5.6


def test_estimate_d_avg_zero_separation():
    # |N(0, 2 I)| in 2D is Rayleigh with scale sqrt(2): mean sqrt(pi)
    assert estimate_d_avg(1.0, 0.0, derive_rng(2), n_pairs=400_000) == pytest.approx(math.sqrt(math.pi), rel=0.01)


# ------------------ equal-distance model ------------------
def test_equal_distance_examples():
    assert equal_distance_wk(4, 1, 1.0) == 1.5
    assert equal_distance_wk(4, 2, 1.0) == 1.0
    assert equal_distance_wk(7, 7, 3.0) == 0.0
    with pytest.raises(InvalidK):
        equal_distance_wk(4, 5, 1.0)


@pytest.mark.parametrize("n", [4, 6, 12])
def test_equal_distance_matches_pooled(n):
    dm = equidistant(n, 2.5)
    for k in range(1, n + 1):
        if n % k:
            continue
        part = Partition.from_labels(np.repeat(np.arange(k), n // k))
        assert pooled_dispersion(part, dm) == pytest.approx(equal_distance_wk(n, k, 2.5), rel=1e-9)


def test_linear_tail_of_equal_distance_model():
    w = [equal_distance_wk(12, k, 2.0) for k in range(1, 11)]
    fit = linear_tail(w, k_from=3)
    assert fit["slope"] == pytest.approx(-1.0)
    assert fit["intercept"] == pytest.approx(12.0)
    assert fit["max_residual"] < 1e-9
    with pytest.raises(InvalidK):
        linear_tail([3.0, 2.0, 1.0], k_from=3)


# ------------------ distance concentration ------------------
def test_concentration_by_hand():
    assert distance_concentration(1, 3, FixedPoints([0.0, 0.5, 1.0])) == pytest.approx(3.0)


def test_concentration_single_pair():
    assert distance_concentration(3, 2, derive_rng(1)) == 0.0


def test_concentration_coincident_points_is_infinite():
    assert distance_concentration(1, 3, FixedPoints([0.0, 0.0, 1.0])) == math.inf


def test_concentration_shrinks_with_dimension():
    assert distance_concentration(100, 100, derive_rng(5)) < distance_concentration(2, 100, derive_rng(5))
    high = [distance_concentration(100, 100, derive_rng(s)) for s in range(50)]
    low = [distance_concentration(2, 100, derive_rng(s)) for s in range(50)]
    assert np.median(high) < np.median(low)


def test_concentration_validation():
    with pytest.raises(InvalidScenario):
        distance_concentration(0, 10, derive_rng(1))


# ------------------ W_1 decomposition ------------------
def test_w1_decomposition_two_points():
    dm = pairwise_matrix(Dataset([[0.0], [2.0]]))
    dec = w1_decomposition(Partition.from_labels([0, 1]), dm)
    assert (dec.w1, dec.w2, dec.d_delta, dec.cross_term, dec.residual) == (2.0, 0.0, 4.0, 4.0, -2.0)


def test_w1_decomposition_duplicated_clusters():
    data = Dataset([[0.0, 0.0]] * 3 + [[3.0, 0.0]] * 3)
    dec = w1_decomposition(Partition.from_labels([0, 0, 0, 1, 1, 1]), pairwise_matrix(data))
    assert dec.w2 == 0.0
    assert dec.d_delta == 9.0
    assert dec.residual == pytest.approx(dec.w1 - dec.cross_term)


def test_w1_decomposition_coincident_points():
    data = Dataset(np.zeros((4, 2)))
    dec = w1_decomposition(Partition.from_labels([0, 1, 0, 1]), pairwise_matrix(data))
    assert dec.cross_term == 0.0
    assert dec.residual == dec.w1 - dec.w2


def test_w1_decomposition_needs_two_clusters():
    with pytest.raises(NotTwoClusters):
        w1_decomposition(Partition.from_labels([0, 1, 2]), equidistant(3))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
