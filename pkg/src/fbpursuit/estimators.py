"""Estimator wrappers with a scikit-learn compatible fit/predict surface.

Each estimator wraps one functional solver from :mod:`fbpursuit.pursuit`.
Constructor arguments are stored verbatim (so ``get_params`` / ``clone``
work); anything derived from the data, such as default ``alpha`` or
``k_max`` values that depend on the number of observations, is resolved
inside ``fit`` and exposed through trailing-underscore attributes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .exceptions import BadDimensionsError
from .pursuit import (
    FbpConfig,
    OmpConfig,
    SpConfig,
    fbp,
    omp,
    sp,
)


def check_problem(X, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate and coerce an observation matrix and observation vector.

    Returns float64 copies with ``X`` of shape (m, n) and ``y`` of shape
    (m,). Raises :class:`BadDimensionsError` for shape mismatches and
    ``ValueError`` for non-finite entries.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise BadDimensionsError("X must be a 2-D observation matrix")
    if y.ndim == 2 and y.shape[1] == 1:
        y = y.ravel()
    if y.ndim != 1:
        raise BadDimensionsError("y must be a 1-D observation vector")
    if X.shape[0] != y.shape[0]:
        raise BadDimensionsError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")
    if not np.all(np.isfinite(y)):
        raise ValueError("y contains non-finite values")
    return X, y


class _PursuitEstimator(RegressorMixin, BaseEstimator):
    """Shared fit/predict plumbing for the pursuit estimators."""

    def fit(self, X, y):
        X, y = check_problem(X, y)
        config = self._resolve_config(X.shape)
        result = self._solve(X, y, config)
        self.config_ = config
        self.result_ = result
        self.coef_ = result.estimate.to_dense()
        self.support_ = result.estimate.support.copy()
        self.n_iter_ = result.iterations
        self.residual_norm_ = result.final_residual_norm
        self.status_ = result.status
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        if not hasattr(self, "coef_"):
            raise AttributeError("this estimator is not fitted yet; call fit first")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise BadDimensionsError(
                f"X must have shape (*, {self.n_features_in_})"
            )
        return X @ self.coef_


class ForwardBackwardPursuit(_PursuitEstimator):
    """Forward-backward pursuit estimator.

    Parameters default per observation count m: ``alpha = round(0.2 m)``
    (at least 2), ``beta = alpha - 1``, ``k_max = m``. Pass explicit values
    to override any of them independently.
    """

    def __init__(
        self,
        alpha=None,
        beta=None,
        k_max=None,
        epsilon=1e-6,
        skip_backward_projection=False,
    ):
        self.alpha = alpha
        self.beta = beta
        self.k_max = k_max
        self.epsilon = epsilon
        self.skip_backward_projection = skip_backward_projection

    def _resolve_config(self, shape):
        m = shape[0]
        alpha = max(2, round(0.2 * m)) if self.alpha is None else self.alpha
        beta = alpha - 1 if self.beta is None else self.beta
        k_max = m if self.k_max is None else self.k_max
        return FbpConfig(
            alpha=alpha,
            beta=beta,
            k_max=k_max,
            epsilon=self.epsilon,
            skip_backward_projection=self.skip_backward_projection,
        )

    @staticmethod
    def _solve(X, y, config):
        return fbp(X, y, config)


class OrthogonalMatchingPursuit(_PursuitEstimator):
    """Orthogonal matching pursuit estimator.

    Unlike scikit-learn's class of the same name, the stopping rule is
    relative: iteration ends when the residual norm reaches
    ``epsilon * ||y||`` or the support reaches ``k_max`` (default m).
    """

    def __init__(self, k_max=None, epsilon=1e-6):
        self.k_max = k_max
        self.epsilon = epsilon

    def _resolve_config(self, shape):
        k_max = shape[0] if self.k_max is None else self.k_max
        return OmpConfig(k_max=k_max, epsilon=self.epsilon)

    @staticmethod
    def _solve(X, y, config):
        return omp(X, y, config)


class SubspacePursuit(_PursuitEstimator):
    """Subspace pursuit estimator for a known target sparsity ``k``."""

    def __init__(self, k=None, max_iter=100):
        self.k = k
        self.max_iter = max_iter

    def _resolve_config(self, shape):
        if self.k is None:
            raise ValueError("SubspacePursuit requires the target sparsity k")
        return SpConfig(k=self.k, max_iter=self.max_iter)

    @staticmethod
    def _solve(X, y, config):
        return sp(X, y, config)
