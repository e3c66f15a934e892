"""Greedy sparse-recovery algorithms.

All solvers share one contract: given an observation matrix ``phi`` of shape
(m, n) and an observation ``y`` of length m, return a
:class:`RecoveryResult` whose estimate is a sparse coefficient vector and
whose ``status`` explains how the iteration ended. None of them mutate their
inputs, and every run is deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .exceptions import (
    BadDimensionsError,
    InstanceTooLargeError,
    RankDeficientError,
)
from .linalg import bottom_k_by_magnitude, correlate, least_squares, top_k_by_magnitude
from .signals import SparseSignal

CONVERGED = "converged"
SUPPORT_CAP_REACHED = "support_cap_reached"
RESIDUAL_STALLED = "residual_stalled"
ILL_POSED_PROJECTION = "ill_posed_projection"

STATUSES = (CONVERGED, SUPPORT_CAP_REACHED, RESIDUAL_STALLED, ILL_POSED_PROJECTION)


@dataclass
class FbpConfig:
    """Forward-backward pursuit parameters.

    ``alpha`` atoms are added and ``beta`` removed each iteration, so the
    support grows by ``alpha - beta`` per iteration until the residual
    drops below ``epsilon * ||y||`` or the support would pass ``k_max``.
    ``skip_backward_projection`` reuses the expanded-support coefficients
    after pruning instead of re-projecting (a cheaper, slightly less
    accurate variant).
    """

    alpha: int
    beta: int
    k_max: int
    epsilon: float = 1e-6
    skip_backward_projection: bool = False

    def __post_init__(self):
        if self.alpha <= 1:
            raise ValueError("alpha must be greater than 1")
        if not 1 <= self.beta < self.alpha:
            raise ValueError("beta must satisfy 1 <= beta < alpha")
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")

    @classmethod
    def defaults(cls, m: int, epsilon: float = 1e-6) -> "FbpConfig":
        """Default parameterization for an m-row observation matrix.

        ``alpha = round(0.2 m)`` (floored at 2 so the pruning step stays
        valid), ``beta = alpha - 1`` and ``k_max = m``.
        """
        alpha = max(2, round(0.2 * m))
        return cls(alpha=alpha, beta=alpha - 1, k_max=m, epsilon=epsilon)


@dataclass
class OmpConfig:
    """Orthogonal matching pursuit parameters (one atom per iteration)."""

    k_max: int
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")


@dataclass
class SpConfig:
    """Subspace pursuit parameters; ``k`` is the target sparsity."""

    k: int
    max_iter: int = 100

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class L0Config:
    """Exhaustive-search oracle parameters."""

    k_max: int

    def __post_init__(self):
        if self.k_max < 0:
            raise ValueError("k_max must be non-negative")


@dataclass
class RecoveryResult:
    """Outcome of a recovery run."""

    estimate: SparseSignal
    iterations: int
    final_residual_norm: float
    status: str


def _check_problem(phi: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    phi = np.asarray(phi, dtype=float)
    y = np.asarray(y, dtype=float)
    if phi.ndim != 2:
        raise BadDimensionsError("observation matrix must be two-dimensional")
    if y.ndim != 1 or y.shape[0] != phi.shape[0]:
        raise BadDimensionsError(
            f"observation length {y.shape} does not match matrix shape {phi.shape}"
        )
    return phi, y


def fbp(phi: np.ndarray, y: np.ndarray, config: FbpConfig) -> RecoveryResult:
    """Forward-backward pursuit.

    Each iteration expands the support by the ``alpha`` columns (outside
    the current support) most correlated with the residual, solves an
    orthogonal projection on the expanded support, prunes the ``beta``
    coefficients smallest in magnitude, re-projects on the pruned support
    and updates the residual. Terminates with ``converged`` when the
    residual norm falls to ``epsilon * ||y||``, with
    ``support_cap_reached`` when the support reaches ``k_max``, and with
    ``ill_posed_projection`` (returning the last well-posed estimate) when
    the expanded support exceeds the row count or the projection is rank
    deficient.
    """
    phi, y = _check_problem(phi, y)
    m, n = phi.shape
    if config.alpha > m:
        warnings.warn(
            f"alpha={config.alpha} exceeds observation count m={m}; "
            "the first expansion already makes the projection ill posed",
            stacklevel=2,
        )
    y_norm = float(np.linalg.norm(y))
    tolerance = config.epsilon * y_norm

    support = np.empty(0, dtype=int)
    coefficients = np.empty(0)
    residual = y.copy()
    residual_norm = y_norm
    iterations = 0
    status = CONVERGED if residual_norm <= tolerance else None

    while status is None:
        available = n - support.size
        grow = min(config.alpha, available)
        if grow <= config.beta:
            # Too few unselected columns remain for the support to grow.
            status = RESIDUAL_STALLED
            break
        if support.size + grow > m:
            status = ILL_POSED_PROJECTION
            break
        correlation = correlate(phi, residual)
        forward = top_k_by_magnitude(correlation, grow, exclude=support)
        expanded = np.union1d(support, forward)
        try:
            expanded_coefficients = least_squares(phi[:, expanded], y)
        except RankDeficientError:
            status = ILL_POSED_PROJECTION
            break
        drop = bottom_k_by_magnitude(expanded_coefficients, config.beta)
        keep = np.setdiff1d(np.arange(expanded.size), drop)
        pruned = expanded[keep]
        if config.skip_backward_projection:
            pruned_coefficients = expanded_coefficients[keep]
        else:
            try:
                pruned_coefficients = least_squares(phi[:, pruned], y)
            except RankDeficientError:
                status = ILL_POSED_PROJECTION
                break
        support = pruned
        coefficients = pruned_coefficients
        residual = y - phi[:, support] @ coefficients
        residual_norm = float(np.linalg.norm(residual))
        iterations += 1
        if residual_norm <= tolerance:
            status = CONVERGED
        elif support.size >= config.k_max:
            status = SUPPORT_CAP_REACHED

    estimate = SparseSignal(n, support, coefficients)
    return RecoveryResult(estimate, iterations, residual_norm, status)


def omp(phi: np.ndarray, y: np.ndarray, config: OmpConfig) -> RecoveryResult:
    """Orthogonal matching pursuit.

    Adds the single most-correlated unselected column per iteration and
    re-projects. Termination statuses mirror :func:`fbp`.
    """
    phi, y = _check_problem(phi, y)
    m, n = phi.shape
    y_norm = float(np.linalg.norm(y))
    tolerance = config.epsilon * y_norm

    support = np.empty(0, dtype=int)
    coefficients = np.empty(0)
    residual = y.copy()
    residual_norm = y_norm
    iterations = 0
    status = CONVERGED if residual_norm <= tolerance else None

    while status is None:
        if support.size == n:
            status = RESIDUAL_STALLED
            break
        if support.size + 1 > m:
            status = ILL_POSED_PROJECTION
            break
        correlation = correlate(phi, residual)
        pick = top_k_by_magnitude(correlation, 1, exclude=support)
        expanded = np.union1d(support, pick)
        try:
            new_coefficients = least_squares(phi[:, expanded], y)
        except RankDeficientError:
            status = ILL_POSED_PROJECTION
            break
        support = expanded
        coefficients = new_coefficients
        residual = y - phi[:, support] @ coefficients
        residual_norm = float(np.linalg.norm(residual))
        iterations += 1
        if residual_norm <= tolerance:
            status = CONVERGED
        elif support.size >= config.k_max:
            status = SUPPORT_CAP_REACHED

    estimate = SparseSignal(n, support, coefficients)
    return RecoveryResult(estimate, iterations, residual_norm, status)


_SP_CONVERGENCE = 1e-12


def sp(phi: np.ndarray, y: np.ndarray, config: SpConfig) -> RecoveryResult:
    """Subspace pursuit with fixed support size ``k``.

    Each iteration unions the current support with the ``k`` columns most
    correlated with the residual, projects, keeps the ``k`` largest
    coefficients and re-projects. Stops as soon as the residual norm fails
    to decrease, returning the previous iterate; the status is
    ``converged`` when the kept residual is below ``1e-12 * ||y||`` and
    ``residual_stalled`` otherwise.
    """
    phi, y = _check_problem(phi, y)
    m, n = phi.shape
    if config.k > n:
        raise BadDimensionsError(f"k={config.k} exceeds column count n={n}")
    if 2 * config.k > m:
        warnings.warn(
            f"2k={2 * config.k} exceeds observation count m={m}; "
            "expanded projections may be ill posed",
            stacklevel=2,
        )
    y_norm = float(np.linalg.norm(y))
    tolerance = _SP_CONVERGENCE * y_norm

    support = np.empty(0, dtype=int)
    coefficients = np.empty(0)
    residual = y.copy()
    residual_norm = y_norm
    iterations = 0
    status = CONVERGED if y_norm == 0.0 else None

    while status is None:
        if iterations >= config.max_iter:
            status = RESIDUAL_STALLED
            break
        correlation = correlate(phi, residual)
        candidates = top_k_by_magnitude(correlation, config.k)
        expanded = np.union1d(support, candidates)
        if expanded.size > m:
            status = ILL_POSED_PROJECTION
            break
        try:
            expanded_coefficients = least_squares(phi[:, expanded], y)
            keep = top_k_by_magnitude(expanded_coefficients, config.k)
            pruned = expanded[keep]
            pruned_coefficients = least_squares(phi[:, pruned], y)
        except RankDeficientError:
            status = ILL_POSED_PROJECTION
            break
        new_residual = y - phi[:, pruned] @ pruned_coefficients
        new_norm = float(np.linalg.norm(new_residual))
        if new_norm >= residual_norm:
            # No progress: keep the previous iterate.
            status = CONVERGED if residual_norm <= tolerance else RESIDUAL_STALLED
            break
        support = pruned
        coefficients = pruned_coefficients
        residual = new_residual
        residual_norm = new_norm
        iterations += 1
        if residual_norm <= tolerance:
            status = CONVERGED

    estimate = SparseSignal(n, support, coefficients)
    return RecoveryResult(estimate, iterations, residual_norm, status)


_L0_MAX_COLUMNS = 24
_L0_MAX_SPARSITY = 4
_L0_RELATIVE_TOLERANCE = 1e-8


def l0_oracle(phi: np.ndarray, y: np.ndarray, k_max: int) -> RecoveryResult:
    """Exhaustive minimum-residual search over supports of size <= ``k_max``.

    Candidate supports are enumerated by increasing size and, within each
    size, lexicographically; the first support whose residual falls below
    ``1e-8 * ||y||`` is returned with status ``converged``. If none
    qualifies, the best support found is returned with
    ``residual_stalled``. The ``iterations`` field counts evaluated
    supports. Guarded to n <= 24 columns and k_max <= 4.
    """
    phi, y = _check_problem(phi, y)
    m, n = phi.shape
    if n > _L0_MAX_COLUMNS or k_max > _L0_MAX_SPARSITY:
        raise InstanceTooLargeError(
            f"exhaustive search limited to n <= {_L0_MAX_COLUMNS} and "
            f"k_max <= {_L0_MAX_SPARSITY}; got n={n}, k_max={k_max}"
        )
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    y_norm = float(np.linalg.norm(y))
    tolerance = _L0_RELATIVE_TOLERANCE * y_norm

    best_support = np.empty(0, dtype=int)
    best_coefficients = np.empty(0)
    best_norm = y_norm
    evaluated = 1  # the empty support
    if y_norm <= tolerance:
        estimate = SparseSignal(n, best_support, best_coefficients)
        return RecoveryResult(estimate, evaluated, best_norm, CONVERGED)

    for size in range(1, k_max + 1):
        for candidate in combinations(range(n), size):
            evaluated += 1
            indices = np.asarray(candidate, dtype=int)
            try:
                w = least_squares(phi[:, indices], y)
            except RankDeficientError:
                continue
            norm = float(np.linalg.norm(y - phi[:, indices] @ w))
            if norm < best_norm:
                best_support, best_coefficients, best_norm = indices, w, norm
            if norm <= tolerance:
                estimate = SparseSignal(n, indices, w)
                return RecoveryResult(estimate, evaluated, norm, CONVERGED)

    estimate = SparseSignal(n, best_support, best_coefficients)
    return RecoveryResult(estimate, evaluated, best_norm, RESIDUAL_STALLED)
