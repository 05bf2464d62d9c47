"""
Seeded random streams.

Splitting function (stable, part of the reproducibility contract):
    derive_rng(seed, *key) = Generator(PCG64(SeedSequence(seed mod 2**64, spawn_key=key)))

    key is a tuple of nonnegative ints, e.g. (b,) for reference replicate b
    or (r, 0) for the data stream of repetition r. SeedSequence with an
    explicit spawn_key is the same stream SeedSequence(seed).spawn() hands
    out to its key-th child, so streams never depend on evaluation order.

Normal variates:
    standard_normal uses the Box-Muller transform on the uniform stream
    (pairs u1, u2 -> sqrt(-2 ln(1 - u1)) * (cos, sin)(2 pi u2), interleaved),
    not numpy's ziggurat, so the transform is pinned here.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

SEED_MASK = (1 << 64) - 1


def _sequence(seed: int, key: Tuple[int, ...]) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in key))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key)."""
    return np.random.Generator(np.random.PCG64(_sequence(seed, key)))


def derive_seed(seed: int, *key: int) -> int:
    """64-bit integer seed for (seed, key), for handing to another seeded stage."""
    return int(_sequence(seed, key).generate_state(1, dtype=np.uint64)[0])


def standard_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """size N(0, 1) variates via Box-Muller on rng.random()."""
    pairs = (size + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * pairs, dtype=np.float64)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:size]


def normal(rng: np.random.Generator, mean, sd: float, shape: Tuple[int, int]) -> np.ndarray:
    """Normal matrix of the given shape, row-major fill from standard_normal."""
    rows, cols = shape
    z = standard_normal(rng, rows * cols).reshape(rows, cols)
    return np.asarray(mean, dtype=np.float64) + sd * z
