import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zchannel.codes import chebyshev_radius, list_decoding_radius
from zchannel.constructions import (
    BalancedParams,
    StackedParams,
    balanced_code,
    balanced_matrix,
    balanced_radius_formula,
    cross_block_min_distance,
    overlap_fraction_samples,
    permutation_tail_bound,
    stacked_code,
    stacked_matrix,
    tau_j_expansion,
    tau_j_ratio,
    unique_block_code,
    unique_block_delta,
)
from zchannel.words import asym_delta


class TestBalanced:
    def test_m2_half(self, bal2):
        assert [str(w) for w in bal2.canonical()] == ["001011", "010101", "100110", "111000"]
        assert bal2.meta["n"] == 6 and bal2.meta["M"] == 4

    def test_matrix_shape_and_weights(self):
        A = balanced_matrix(BalancedParams(2, Fraction(1, 3)))
        assert A.shape == (6, 15)
        assert (A.sum(axis=0) == 2).all()
        assert (A.sum(axis=1) == 5).all()

    @pytest.mark.parametrize("m,w", [(2, "2/5"), (3, "3/4"), (1, "1/3")])
    def test_accepts_integral_ratio(self, m, w):
        BalancedParams(m, w)

    @pytest.mark.parametrize("m,w", [(2, "3/5"), (1, 0), (3, 1), (0, "1/2")])
    def test_rejects(self, m, w):
        with pytest.raises(ValueError):
            BalancedParams(m, w)

    def test_formula_values(self):
        assert balanced_radius_formula(BalancedParams(2, "1/2"), 2) == 2
        assert balanced_radius_formula(BalancedParams(2, "1/2"), 3) == 3
        assert balanced_radius_formula(BalancedParams(2, "1/3"), 2) == 4

    def test_formula_needs_enough_rows(self):
        with pytest.raises(ValueError):
            balanced_radius_formula(BalancedParams(1, "1/2"), 3)

    def test_every_list_has_the_same_radius(self):
        code = balanced_code(BalancedParams(2, Fraction(2, 5)))
        for L in (2, 3, 4):
            expected = balanced_radius_formula(BalancedParams(2, Fraction(2, 5)), L)
            assert {chebyshev_radius(s) for s in combinations(code.words, L)} == {expected}

    def test_deterministic(self):
        p = BalancedParams(3, "1/2")
        assert balanced_code(p).to_json() == balanced_code(p).to_json()


class TestUniqueBlocks:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_pairwise_delta_is_constant(self, m):
        for j in range(-m + 1, m):
            c = unique_block_code(m, j)
            ds = {asym_delta(x, y) for x in c for y in c if x != y}
            assert ds == {unique_block_delta(m, j)}

    def test_tau_forms_agree(self):
        for m in range(1, 9):
            for j in range(-m + 1, m):
                assert tau_j_ratio(m, j) == tau_j_expansion(m, j)

    def test_values(self):
        assert [unique_block_delta(3, j) for j in (-2, -1, 0, 1, 2)] == [1, 4, 6, 4, 1]
        assert tau_j_ratio(3, 0) == Fraction(1, 4)

    @pytest.mark.parametrize("j", [-3, 3, 5])
    def test_j_range(self, j):
        with pytest.raises(ValueError):
            unique_block_code(3, j)


class TestStacked:
    def test_lengths_and_weights(self):
        A, block_of, info = stacked_matrix(StackedParams(3, (0, 1), seed=1))
        assert A.shape == (12, 60)
        assert info["n_j"] == {0: 20, 1: 15}
        assert info["z"] == {0: 3, 1: 4}
        assert info["row_weights"] == {0: 30, 1: 20}
        assert A[block_of == 0].sum(axis=1).tolist() == [30] * 6
        assert A[block_of == 1].sum(axis=1).tolist() == [20] * 6

    def test_blocks_keep_their_pairwise_delta_after_permutation(self):
        A, block_of, info = stacked_matrix(StackedParams(3, (0, 1), seed=7))
        for j in (0, 1):
            B = A[block_of == j].astype(int)
            for a, b in combinations(range(B.shape[0]), 2):
                d = int(((B[a] == 1) & (B[b] == 0)).sum())
                assert d == info["z"][j] * unique_block_delta(3, j)

    def test_seed_reproducible_and_sensitive(self):
        p = StackedParams(3, (0, 1), seed=4)
        assert stacked_code(p).to_json() == stacked_code(p).to_json()
        assert stacked_code(p).to_json() != stacked_code(StackedParams(3, (0, 1), seed=5)).to_json()

    def test_block_map_covers_code(self):
        c = stacked_code(StackedParams(2, (0, 1), seed=0))
        assert set(c.meta["block_of"]) == {str(w) for w in c}
        assert sorted(c.meta["block_of"].values()) == [0] * 4 + [1] * 4

    def test_explicit_replication(self):
        A, _, info = stacked_matrix(StackedParams(3, (0, 1), replication={0: 3, 1: 4}))
        assert info["N"] == 60
        with pytest.raises(ValueError, match="share one length"):
            stacked_matrix(StackedParams(3, (0, 1), replication={0: 1, 1: 1}))

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            stacked_matrix(StackedParams(6, (0, 1, 2), max_length=1000))

    def test_list_mode(self):
        A, block_of, info = stacked_matrix(StackedParams(6, (0, 1), L=3), mode="list")
        assert info["rows"] == {0: 6, 1: 6}
        assert (A.sum(axis=1) > 0).all()

    def test_params_validation(self):
        with pytest.raises(ValueError):
            StackedParams(3, ())
        with pytest.raises(ValueError):
            StackedParams(3, (0, 0))
        with pytest.raises(ValueError):
            StackedParams(3, (0, 1), replication={0: 1})

    def test_cross_block_distance(self):
        A, block_of, _ = stacked_matrix(StackedParams(3, (0, 1), seed=1))
        exact = cross_block_min_distance(A, block_of)
        assert exact == {"min": 15, "exact": True}
        est = cross_block_min_distance(A, block_of, sample_columns=30, seed=0)
        assert not est["exact"] and est["min"] >= 0

    def test_stacked_radius_is_at_most_blockwise(self):
        c = stacked_code(StackedParams(3, (0, 1), seed=1))
        r = list_decoding_radius(c, 2).radius
        assert r <= 3 * unique_block_delta(3, 0)
        assert r <= 4 * unique_block_delta(3, 1)


class TestTailBound:
    def test_values(self):
        assert permutation_tail_bound([0.5, 0.5], 0.1, 1000) == pytest.approx(3 * math.exp(-1000 * 0.01 / 8))
        assert permutation_tail_bound([0.5, 0.5], 0.1, 10) == 1.0
        assert permutation_tail_bound([0.5, 0.5], 0.4, 10) == 0.0

    def test_gamma_positive(self):
        with pytest.raises(ValueError):
            permutation_tail_bound([0.5], 0, 10)

    def test_bound_dominates_empirical_tail(self):
        ws, N, gamma = [0.5, 0.5], 400, 0.08
        samples = overlap_fraction_samples(ws, N, 2000, seed=3)
        freq = float(np.mean(samples >= gamma + 0.25))
        assert freq <= permutation_tail_bound(ws, gamma, N)
        assert abs(float(samples.mean()) - 0.25) < 0.01

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0.05, 0.95), min_size=1, max_size=4), st.floats(1e-3, 0.5),
           st.integers(1, 5000))
    def test_is_probability(self, ws, gamma, N):
        v = permutation_tail_bound(ws, gamma, N)
        assert 0.0 <= v <= 1.0
