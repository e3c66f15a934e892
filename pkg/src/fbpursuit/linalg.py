"""Dense linear-algebra kernels shared by the pursuit algorithms."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import (
    BadDimensionsError,
    InsufficientCandidatesError,
    RankDeficientError,
)

RANK_TOLERANCE = 1e-12


def least_squares(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve ``min_w ||a @ w - y||_2`` by Householder QR.

    Parameters
    ----------
    a : (m, k) array
        Coefficient matrix, m >= k expected for a determined fit.
    y : (m,) array
        Right-hand side.

    Returns
    -------
    (k,) array of coefficients.

    Raises
    ------
    RankDeficientError
        If any diagonal entry of the triangular factor is smaller in
        magnitude than ``RANK_TOLERANCE`` times the largest one (a zero
        matrix counts as deficient). Callers treat this as an ill-posed
        projection rather than silently regularizing.
    """
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    if a.ndim != 2 or y.ndim != 1 or a.shape[0] != y.shape[0]:
        raise BadDimensionsError(
            f"incompatible shapes for least squares: {a.shape} and {y.shape}"
        )
    if a.shape[1] == 0:
        return np.empty(0)
    q, r = np.linalg.qr(a, mode="reduced")
    diag = np.abs(np.diag(r))
    largest = diag.max()
    if largest == 0.0 or diag.min() < RANK_TOLERANCE * largest:
        raise RankDeficientError(
            f"triangular factor is numerically singular (shape {a.shape})"
        )
    return solve_triangular(r, q.T @ y, lower=False)


def correlate(phi: np.ndarray, residual: np.ndarray) -> np.ndarray:
    """Correlations ``phi.T @ residual`` of every column with the residual."""
    phi = np.asarray(phi, dtype=float)
    residual = np.asarray(residual, dtype=float)
    if phi.ndim != 2 or residual.ndim != 1 or phi.shape[0] != residual.shape[0]:
        raise BadDimensionsError(
            f"incompatible shapes for correlate: {phi.shape} and {residual.shape}"
        )
    return phi.T @ residual


def _magnitude_order(values: np.ndarray) -> np.ndarray:
    """Indices sorted by descending magnitude, ties toward the lower index."""
    return np.argsort(-np.abs(values), kind="stable")


def top_k_by_magnitude(
    values: np.ndarray, k: int, exclude: np.ndarray | None = None
) -> np.ndarray:
    """Indices of the ``k`` largest-magnitude entries, ascending.

    Ties are broken toward the lower index. ``exclude`` removes indices
    from consideration before selection.

    Raises
    ------
    InsufficientCandidatesError
        If fewer than ``k`` candidate indices remain after exclusion.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise BadDimensionsError("values must be one-dimensional")
    if k < 0:
        raise InsufficientCandidatesError("k must be non-negative")
    excluded = np.asarray([] if exclude is None else exclude, dtype=int)
    if k > values.shape[0] - excluded.shape[0]:
        raise InsufficientCandidatesError(
            f"requested {k} of {values.shape[0] - excluded.shape[0]} candidates"
        )
    if k == 0:
        return np.empty(0, dtype=int)
    magnitudes = np.abs(values)
    if excluded.size:
        magnitudes = magnitudes.copy()
        magnitudes[excluded] = -np.inf
    order = np.argsort(-magnitudes, kind="stable")
    return np.sort(order[:k])


def bottom_k_by_magnitude(values: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` smallest-magnitude entries, ascending.

    Selected as the complement of ``top_k_by_magnitude(values, n - k)``
    under one shared stable ordering, so top-k and bottom-k always
    partition the index set; among equal magnitudes the bottom set takes
    the higher indices.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise BadDimensionsError("values must be one-dimensional")
    if k < 0 or k > values.shape[0]:
        raise InsufficientCandidatesError(
            f"requested {k} of {values.shape[0]} candidates"
        )
    if k == 0:
        return np.empty(0, dtype=int)
    order = _magnitude_order(values)
    return np.sort(order[values.shape[0] - k :])
