"""Least-squares and selection kernels against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbpursuit.exceptions import (
    BadDimensionsError,
    InsufficientCandidatesError,
    RankDeficientError,
)
from fbpursuit.linalg import (
    bottom_k_by_magnitude,
    correlate,
    least_squares,
    top_k_by_magnitude,
)
from fbpursuit.rng import Rng


def normal_equations_oracle(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve the least-squares problem by explicitly inverting A^T A."""
    return np.linalg.inv(a.T @ a) @ (a.T @ y)


def random_system(seed: int, m: int, k: int):
    rng = Rng(seed)
    a = rng.standard_normal(m * k).reshape(m, k)
    y = rng.standard_normal(m)
    return a, y


class TestLeastSquares:
    def test_matches_normal_equations_oracle(self):
        a, y = random_system(7, 10, 4)
        w = least_squares(a, y)
        np.testing.assert_allclose(w, normal_equations_oracle(a, y), atol=1e-8)

    def test_orthogonal_columns_give_projections(self):
        a = np.array(
            [[1, 0], [1, 0], [0, 1], [0, 1]], dtype=float
        ) / np.sqrt(2.0)
        y = np.array([1.0, 1.0, 2.0, 2.0])
        w = least_squares(a, y)
        np.testing.assert_allclose(w, [np.sqrt(2.0), 2.0 * np.sqrt(2.0)], atol=1e-12)

    def test_square_system_is_exact_solve(self):
        a, _ = random_system(3, 6, 6)
        w_true = Rng(4).standard_normal(6)
        w = least_squares(a, a @ w_true)
        np.testing.assert_allclose(w, w_true, atol=1e-9)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=60, deadline=None)
    def test_residual_orthogonal_to_column_span(self, seed):
        a, y = random_system(seed, 12, 5)
        w = least_squares(a, y)
        residual = y - a @ w
        bound = 1e-8 * np.abs(a).sum(axis=1).max() * np.linalg.norm(y)
        assert np.max(np.abs(a.T @ residual)) <= max(bound, 1e-12)

    def test_duplicate_columns_rejected(self):
        base, y = random_system(9, 8, 1)
        a = np.column_stack([base, base])
        with pytest.raises(RankDeficientError):
            least_squares(a, y)

    def test_zero_matrix_rejected(self):
        with pytest.raises(RankDeficientError):
            least_squares(np.zeros((5, 2)), np.ones(5))

    def test_nearly_dependent_columns_rejected(self):
        base, y = random_system(11, 8, 1)
        a = np.column_stack([base, base * (1.0 + 1e-15)])
        with pytest.raises(RankDeficientError):
            least_squares(a, y)

    def test_no_columns_returns_empty(self):
        assert least_squares(np.zeros((4, 0)), np.ones(4)).size == 0

    def test_shape_mismatch(self):
        with pytest.raises(BadDimensionsError):
            least_squares(np.ones((4, 2)), np.ones(5))
        with pytest.raises(BadDimensionsError):
            least_squares(np.ones(4), np.ones(4))


class TestCorrelate:
    def test_matches_loop_oracle(self):
        rng = Rng(15)
        phi = rng.standard_normal(6 * 9).reshape(6, 9)
        r = rng.standard_normal(6)
        expected = np.array(
            [sum(phi[i, j] * r[i] for i in range(6)) for j in range(9)]
        )
        np.testing.assert_allclose(correlate(phi, r), expected, atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(BadDimensionsError):
            correlate(np.ones((4, 2)), np.ones(3))


def sort_oracle_top(values, k):
    """Largest magnitudes first; ties broken by lower index."""
    order = sorted(range(len(values)), key=lambda i: (-abs(values[i]), i))
    return sorted(order[:k])


class TestTopK:
    def test_basic_selection(self):
        v = np.array([3.0, -5.0, 1.0])
        assert top_k_by_magnitude(v, 1).tolist() == [1]
        assert top_k_by_magnitude(v, 2).tolist() == [0, 1]

    def test_ties_prefer_lower_index(self):
        v = np.array([2.0, -2.0, 2.0])
        assert top_k_by_magnitude(v, 2).tolist() == [0, 1]

    def test_matches_sort_oracle(self):
        for seed in range(30):
            values = Rng(seed).standard_normal(20)
            for k in (0, 1, 5, 20):
                assert (
                    top_k_by_magnitude(values, k).tolist()
                    == sort_oracle_top(values.tolist(), k)
                )

    def test_exclusion(self):
        v = np.array([3.0, -5.0, 1.0, 4.0])
        assert top_k_by_magnitude(v, 2, exclude=np.array([1])).tolist() == [0, 3]

    def test_exclusion_shrinks_candidate_pool(self):
        v = np.ones(4)
        with pytest.raises(InsufficientCandidatesError):
            top_k_by_magnitude(v, 4, exclude=np.array([0]))

    def test_too_many_requested(self):
        with pytest.raises(InsufficientCandidatesError):
            top_k_by_magnitude(np.ones(3), 4)

    def test_zero_k(self):
        assert top_k_by_magnitude(np.ones(3), 0).size == 0


class TestBottomK:
    def test_basic_selection(self):
        v = np.array([3.0, -5.0, 1.0])
        assert bottom_k_by_magnitude(v, 1).tolist() == [2]
        assert bottom_k_by_magnitude(v, 2).tolist() == [0, 2]

    def test_ties_complement_top(self):
        v = np.array([2.0, -2.0, 2.0])
        assert bottom_k_by_magnitude(v, 1).tolist() == [2]

    def test_too_many_requested(self):
        with pytest.raises(InsufficientCandidatesError):
            bottom_k_by_magnitude(np.ones(3), 4)

    @given(
        st.integers(min_value=0, max_value=10_000),
        st.integers(min_value=1, max_value=24),
        st.booleans(),
    )
    @settings(max_examples=150, deadline=None)
    def test_partition_property(self, seed, n, quantize):
        values = Rng(seed).standard_normal(n)
        if quantize:
            # integer magnitudes force ties, the hard case for partitioning
            values = np.rint(values * 2.0)
        for k in range(n + 1):
            top = top_k_by_magnitude(values, n - k)
            bottom = bottom_k_by_magnitude(values, k)
            merged = sorted(top.tolist() + bottom.tolist())
            assert merged == list(range(n))

    def test_bottom_magnitudes_never_exceed_kept(self):
        for seed in range(20):
            values = Rng(seed).standard_normal(15)
            for k in (1, 7, 14):
                dropped = np.abs(values[bottom_k_by_magnitude(values, k)])
                kept = np.abs(values[top_k_by_magnitude(values, 15 - k)])
                if kept.size and dropped.size:
                    assert dropped.max() <= kept.min() + 1e-12
