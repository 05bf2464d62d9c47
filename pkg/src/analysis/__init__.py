"""
Analytic companions of the Gap experiments: expected distance in a
rectangle, the size-ratio feasibility check, the equal-distance W_k model,
distance concentration and the W_1 decomposition.
"""

from .geometry import (
    DIRECT,
    LOG,
    FeasibilityResult,
    RectSpec,
    UnequalSizeScenario,
    W1Decomposition,
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

__all__ = [
    'DIRECT', 'LOG', 'FeasibilityResult', 'RectSpec', 'UnequalSizeScenario', 'W1Decomposition',
    'distance_concentration', 'equal_distance_wk', 'estimate_d_avg', 'expected_rect_distance',
    'feasibility_inequality', 'feasible_ratio', 'linear_tail', 'monte_carlo_rect_distance',
    'w1_decomposition',
]
