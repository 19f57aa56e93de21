"""Chunked, seed-partitioned Monte Carlo means with standard errors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CHUNK = 1 << 15
MIN_SAMPLES = 100


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean of an integrand with the standard error of that mean.

    ``value`` and ``std_error`` are floats for scalar integrands and arrays for
    vector-valued ones.
    """

    value: float
    std_error: float
    samples: int
    seed: int

    def zscore(self, target: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.value == target else float("inf")
        return abs(self.value - target) / self.std_error

    def agrees_with(self, target: float, k: float = 3.0) -> bool:
        return bool(abs(self.value - target) <= k * self.std_error)


def chunk_streams(seed: int, samples: int, chunk: int = CHUNK):
    """Yield ``(rng, size)`` per chunk; chunk ``k`` always gets child stream ``k`` of ``seed``.

    The partition depends only on ``(seed, samples, chunk)``, so chunks can be
    farmed out to workers in any order without changing the result.
    """
    n_chunks = -(-samples // chunk)
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    for k, ss in enumerate(children):
        size = min(chunk, samples - k * chunk)
        yield np.random.default_rng(ss), size


def mc_mean(draw, samples: int, seed: int, chunk: int = CHUNK) -> MCEstimate:
    """Mean of ``draw(rng, m)`` over ``samples`` draws, merged chunkwise with the pairwise mean/variance update."""
    if int(samples) != samples or samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples!r}")
    samples = int(samples)
    n = 0
    mean = 0.0
    m2 = 0.0
    for rng, size in chunk_streams(seed, samples, chunk):
        vals = np.asarray(draw(rng, size), dtype=float)
        c_mean = vals.mean(axis=0)
        c_m2 = ((vals - c_mean) ** 2).sum(axis=0)
        delta = c_mean - mean
        tot = n + size
        mean = mean + delta * size / tot
        m2 = m2 + c_m2 + delta**2 * n * size / tot
        n = tot
    se = np.sqrt(m2 / (n - 1) / n)
    if np.ndim(mean) == 0:
        return MCEstimate(float(mean), float(se), n, int(seed))
    return MCEstimate(mean, se, n, int(seed))
