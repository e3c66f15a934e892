"""Sparse test signals and the random observation model."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import BadDimensionsError, ZeroSignalError
from .rng import Rng

GAUSSIAN = "gaussian"
UNIFORM = "uniform"
CARS = "cars"
ENSEMBLES = (GAUSSIAN, UNIFORM, CARS)


@dataclass
class SparseSignal:
    """A length-``length`` vector stored as (support, values) pairs.

    ``support`` holds strictly increasing indices and ``values`` the matching
    nonzero coefficients; the remaining entries are zero.
    """

    length: int
    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.support = np.asarray(self.support, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.support.shape != self.values.shape or self.support.ndim != 1:
            raise BadDimensionsError("support and values must be matching 1-D arrays")
        if self.support.size:
            if self.support.min() < 0 or self.support.max() >= self.length:
                raise BadDimensionsError("support index out of range")
            if np.any(np.diff(self.support) <= 0):
                raise BadDimensionsError("support must be strictly increasing")

    @property
    def sparsity(self) -> int:
        return int(self.support.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.length)
        dense[self.support] = self.values
        return dense

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseSignal":
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 1:
            raise BadDimensionsError("dense signal must be one-dimensional")
        support = np.flatnonzero(dense)
        return cls(dense.shape[0], support, dense[support])


@dataclass
class Observation:
    """An observation vector with optional noise metadata."""

    y: np.ndarray
    snr_db: float | None = None
    noise_power: float = 0.0

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.y.ndim != 1:
            raise BadDimensionsError("observation must be one-dimensional")


def sample_observation_matrix(m: int, n: int, rng: Rng) -> np.ndarray:
    """An m x n matrix of independent N(0, 1/n^2) entries (std 1/n).

    Columns are intentionally not normalized; matching the generation
    convention of the reference benchmarks matters more than unit norms,
    and all algorithms here are scale-invariant in the matrix.
    """
    if m <= 0 or n <= 0:
        raise BadDimensionsError("matrix dimensions must be positive")
    return rng.standard_normal(m * n).reshape(m, n) / n


def sample_sparse_signal(n: int, k: int, ensemble: str, rng: Rng) -> SparseSignal:
    """A k-sparse length-n signal with uniformly random support.

    Nonzero values follow the named ensemble: ``gaussian`` (standard
    normal), ``uniform`` (uniform on [-1, 1]) or ``cars`` (unit magnitude,
    random sign).
    """
    if not 0 <= k <= n:
        raise BadDimensionsError(f"sparsity {k} out of range for length {n}")
    if ensemble not in ENSEMBLES:
        raise ValueError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")
    support = rng.subset(n, k)
    if ensemble == GAUSSIAN:
        values = rng.standard_normal(k)
    elif ensemble == UNIFORM:
        values = rng.uniform(k, -1.0, 1.0)
    else:
        values = rng.signs(k)
    return SparseSignal(n, support, values)


def observe(phi: np.ndarray, x: SparseSignal) -> Observation:
    """Noiseless observation ``y = phi @ x``."""
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[1] != x.length:
        raise BadDimensionsError(
            f"matrix shape {phi.shape} does not match signal length {x.length}"
        )
    return Observation(phi @ x.to_dense())


def add_noise(y: np.ndarray, snr_db: float, rng: Rng) -> Observation:
    """Add white Gaussian noise scaled for an exact signal-to-noise ratio.

    The raw noise draw is rescaled so that ``||noise|| = ||y|| * 10^(-snr/20)``
    exactly; the realized SNR therefore equals ``snr_db`` rather than only in
    expectation.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise BadDimensionsError("observation must be one-dimensional")
    y_norm = float(np.linalg.norm(y))
    if y_norm == 0.0:
        raise ZeroSignalError("cannot scale noise against an all-zero observation")
    raw = rng.standard_normal(y.shape[0])
    raw_norm = float(np.linalg.norm(raw))
    scale = y_norm * 10.0 ** (-snr_db / 20.0) / raw_norm
    noise = raw * scale
    return Observation(y + noise, snr_db=snr_db, noise_power=float(noise @ noise))
