"""Reproducible conditional inverse sampling.

Uniforms come from a counter-based Philox stream: pair i is generated from
counter block i under the key `seed`, so output never depends on chunking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_WORDS_PER_BLOCK = 4
_TWO_M53 = 2.0 ** -53


@dataclass(frozen=True)
class SampleBatch:
    n: int
    seed: int
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def pairs(self):
        return list(zip(self.x.tolist(), self.y.tolist()))

    def __len__(self):
        return self.n


def uniform_pairs(seed: int, start: int, count: int):
    """Two open-interval uniforms for each pair index in [start, start + count)."""
    if count <= 0:
        return np.empty(0), np.empty(0)
    bg = np.random.Philox(key=int(seed) & (2 ** 128 - 1), counter=[int(start), 0, 0, 0])
    raw = bg.random_raw(_WORDS_PER_BLOCK * count).reshape(count, _WORDS_PER_BLOCK)
    # 53 high bits, centred in their cell so 0 and 1 are never produced
    u = ((raw[:, :2] >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53
    return u[:, 0], u[:, 1]


def sample(c, n: int, seed: int = 0, chunk_size: int = 65536) -> SampleBatch:
    """X uniform, Y = conditional quantile of the Markov kernel at an independent uniform."""
    if n < 1:
        raise ValueError("n must be positive")
    xs, ys = [], []
    for start in range(0, n, chunk_size):
        m = min(chunk_size, n - start)
        ux, uy = uniform_pairs(seed, start, m)
        xs.append(ux)
        ys.append(c.kernel_quantile_array(ux, uy))
    return SampleBatch(n, int(seed), np.concatenate(xs), np.concatenate(ys))


@dataclass(frozen=True)
class EmpiricalCDF:
    """Right-continuous step function with a jump of 1/n at each sorted value."""
    values: np.ndarray

    def __call__(self, t):
        return np.searchsorted(self.values, t, side="right") / self.values.size

    def left(self, t):
        return np.searchsorted(self.values, t, side="left") / self.values.size


def empirical_kendall(batch: SampleBatch, c) -> EmpiricalCDF:
    w = np.sort(np.asarray(c.cdf(batch.x, batch.y), dtype=float))
    return EmpiricalCDF(w)


def ks_distance(ecdf: EmpiricalCDF, cdf, cdf_left=None, snap_points=(), snap_tol: float = 1e-9) -> float:
    """Sup distance between an empirical CDF and a (possibly discontinuous) CDF.

    `cdf` and `cdf_left` are vectorized callables.
    Sample values within `snap_tol` of a known jump location are moved onto it,
    so floating-point noise in C(X, Y) does not split an atom across its jump.
    """
    v = np.array(ecdf.values, dtype=float)
    for p in snap_points:
        v[np.abs(v - p) <= snap_tol] = p
    v.sort()
    n = v.size
    cdf_left = cdf_left or cdf
    uniq, first = np.unique(v, return_index=True)
    last = np.append(first[1:], n)
    F = np.asarray(cdf(uniq), dtype=float)
    FL = np.asarray(cdf_left(uniq), dtype=float)
    # compare at each support point and just before it
    d_right = np.abs(last / n - F)
    d_left = np.abs(first / n - FL)
    return float(max(d_right.max(), d_left.max()))


def ks_threshold(n: int) -> float:
    return 1.63 / math.sqrt(n)


def uniform_ks(values) -> float:
    v = np.sort(np.asarray(values, float))
    n = v.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - v), np.max(v - (i - 1) / n)))
