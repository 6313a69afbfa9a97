"""Tests for the seeded Linial-Meshulam sampler and its byte streams."""

import math
from math import comb

import numpy as np
import pytest
from pydantic import ValidationError

from zk_betti.domain import LMParams, build_skeleton, sample_lm, sample_stream
from zk_betti.domain.crypto import canonical_json, derive_trial_seed, keystream, uniform_variates
from zk_betti.domain.sampler import candidate_masks


class TestByteStreams:
    """Keystream variates and trial seeds."""

    def test_keystream_is_deterministic(self):
        assert keystream(42, 64) == keystream(42, 64)
        assert keystream(42, 64) != keystream(43, 64)

    def test_variates_extend_prefix(self):
        long = uniform_variates(7, 100)
        assert np.array_equal(long[:10], uniform_variates(7, 10))

    def test_variates_in_unit_interval(self):
        u = uniform_variates(1, 5000)
        assert u.min() >= 0.0
        assert u.max() < 1.0
        assert abs(u.mean() - 0.5) < 4 * math.sqrt(1 / 12 / 5000)

    def test_empty_request(self):
        assert uniform_variates(1, 0).size == 0

    def test_trial_seeds(self):
        seeds = {derive_trial_seed(9, t) for t in range(100)}
        assert len(seeds) == 100
        assert all(0 <= s < 2 ** 64 for s in seeds)
        assert derive_trial_seed(9, 3) == derive_trial_seed(9, 3)

    def test_negative_trial(self):
        with pytest.raises(ValueError):
            derive_trial_seed(9, -1)

    def test_seed_range(self):
        with pytest.raises(ValueError):
            keystream(2 ** 64, 8)

    def test_canonical_json_sorts_keys(self):
        assert canonical_json({"b": 1, "a": [1, 2]}) == b'{"a":[1,2],"b":1}'


class TestSampleLM:
    """Y^d(n, p) samples."""

    def test_p_one_gives_skeleton(self):
        assert sample_lm(LMParams(n=5, d=1, p=1.0, seed=3)) == build_skeleton(5, 1)

    def test_p_zero_gives_lower_skeleton(self):
        assert sample_lm(LMParams(n=5, d=2, p=0.0, seed=3)) == build_skeleton(5, 1)

    def test_deterministic(self):
        params = LMParams(n=4, d=1, p=0.5, seed=42)
        assert sample_lm(params) == sample_lm(params)

    def test_structure(self):
        for seed in range(30):
            d = 1 + seed % 2
            n = 4 + seed % 5
            K = sample_lm(LMParams(n=n, d=d, p=0.5, seed=seed))
            assert K.dim <= d
            for k in range(d):
                assert K.count(k) == comb(n, k + 1)

    def test_candidates_are_colex(self):
        masks = candidate_masks(5, 2)
        assert len(masks) == comb(5, 3)
        assert list(masks) == sorted(masks)
        assert masks[0] == 0b00111

    def test_monotone_in_p(self):
        for seed in range(10):
            low = sample_lm(LMParams(n=7, d=2, p=0.3, seed=seed)).masks(2)
            high = sample_lm(LMParams(n=7, d=2, p=0.6, seed=seed)).masks(2)
            assert low <= high

    def test_coupled_in_n(self):
        for seed in range(10):
            small = sample_lm(LMParams(n=6, d=1, p=0.5, seed=seed)).masks(1)
            large = sample_lm(LMParams(n=9, d=1, p=0.5, seed=seed)).masks(1)
            assert small == frozenset(m for m in large if m < 1 << 6)

    def test_invalid_dimension(self):
        with pytest.raises(ValidationError):
            LMParams(n=3, d=3, p=0.5, seed=0)

    def test_invalid_probability(self):
        with pytest.raises(ValidationError):
            LMParams(n=3, d=1, p=1.5, seed=0)

    def test_invalid_seed(self):
        with pytest.raises(ValidationError):
            LMParams(n=3, d=1, p=0.5, seed=2 ** 64)


class TestSampleStream:
    """Per-trial substreams."""

    def test_matches_derived_seed(self):
        params = LMParams(n=8, d=1, p=0.5, seed=5)
        expected = sample_lm(LMParams(n=8, d=1, p=0.5, seed=derive_trial_seed(5, 2)))
        assert sample_stream(params, 2) == expected

    def test_trials_differ(self):
        params = LMParams(n=10, d=1, p=0.5, seed=5)
        assert sample_stream(params, 0) != sample_stream(params, 1)

    def test_edge_count_mean(self):
        params = LMParams(n=30, d=1, p=0.5, seed=2024)
        counts = np.array([sample_stream(params, t).count(1) for t in range(2000)])
        se = math.sqrt(435 * 0.25 / 2000)
        assert abs(counts.mean() - 217.5) <= 3 * se

    @pytest.mark.slow
    def test_simplex_count_is_binomial(self):
        M, p, T = comb(8, 3), 0.3, 5000
        params = LMParams(n=8, d=2, p=p, seed=77)
        counts = np.array([sample_stream(params, t).count(2) for t in range(T)], dtype=float)
        mean, var = M * p, M * p * (1 - p)
        assert abs(counts.mean() - mean) <= 4 * math.sqrt(var / T)
        assert abs(counts.var(ddof=1) - var) <= 4 * var * math.sqrt(2 / (T - 1))
