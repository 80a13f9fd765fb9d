import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpsim.features import FeatureKind
from corpsim.similarity import (FrequencyVector, UndefinedCorrelationError, chi_square_distance,
                                rank_with_ties, spearman_similarity)

from oracles import naive_chi_square, naive_ranks, naive_spearman


def vec(values, label=""):
    return FrequencyVector(np.asarray(values, dtype=np.int64), "v", FeatureKind.WORD, label)


counts = st.lists(st.integers(0, 50), min_size=2, max_size=60)


def varied(xs):
    return len(set(xs)) > 1


class TestRanks:
    @pytest.mark.parametrize("values, expected", [
        ((5, 3, 3, 1), (1, 2.5, 2.5, 4)),
        ((7, 7, 7), (2, 2, 2)),
        ((0, 9, 0), (2.5, 1, 2.5)),
        ((1,), (1,)),
    ])
    def test_examples(self, values, expected):
        assert rank_with_ties(values).tolist() == list(expected)

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.integers(0, 10), min_size=1, max_size=50))
    def test_matches_naive(self, xs):
        assert rank_with_ties(xs).tolist() == naive_ranks(xs)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 10), min_size=1, max_size=50))
    def test_rank_sum(self, xs):
        n = len(xs)
        assert rank_with_ties(xs).sum() == n * (n + 1) / 2


class TestSpearman:
    def test_identity(self):
        assert spearman_similarity(vec([3, 1, 2, 2]), vec([3, 1, 2, 2])) == pytest.approx(1.0, abs=1e-12)

    def test_full_reversal(self):
        assert spearman_similarity(vec([5, 3, 2]), vec([2, 3, 5])) == -1.0

    def test_hand_value(self):
        # ranks (1.5, 1.5, 3) vs (1.5, 3, 1.5)
        assert spearman_similarity(vec([4, 4, 2]), vec([4, 2, 4])) == pytest.approx(-0.5, abs=1e-12)

    def test_constant_vector_is_named(self):
        with pytest.raises(UndefinedCorrelationError, match="zeros"):
            spearman_similarity(vec([1, 2, 3]), vec([0, 0, 0], label="zeros"))

    def test_preconditions(self):
        with pytest.raises(ValueError):
            spearman_similarity(vec([1, 2]), vec([1, 2, 3]))
        with pytest.raises(ValueError):
            spearman_similarity(vec([1]), vec([1]))
        other = FrequencyVector(np.array([1, 2]), "other", FeatureKind.WORD)
        with pytest.raises(ValueError):
            spearman_similarity(vec([1, 2]), other)

    @settings(max_examples=300, deadline=None)
    @given(counts.flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 50), min_size=len(a),
                                                                   max_size=len(a)))))
    def test_oracle_symmetry_range(self, pair):
        a, b = pair
        if not (varied(a) and varied(b)):
            return
        rho = spearman_similarity(vec(a), vec(b))
        assert rho == spearman_similarity(vec(b), vec(a))
        assert -1.0 <= rho <= 1.0
        assert rho == pytest.approx(naive_spearman(a, b), abs=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(counts.flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 50), min_size=len(a),
                                                                   max_size=len(a)))),
           st.integers(1, 10_000))
    def test_scale_invariance(self, pair, c):
        a, b = pair
        if not (varied(a) and varied(b)):
            return
        assert spearman_similarity(vec([c * x for x in a]), vec(b)) == spearman_similarity(vec(a), vec(b))

    @settings(max_examples=200, deadline=None)
    @given(counts.flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 50), min_size=len(a),
                                                                   max_size=len(a)))))
    def test_monotone_invariance(self, pair):
        a, b = pair
        if not (varied(a) and varied(b)):
            return
        transformed = [x * x * x + 7 * x + 3 for x in a]
        assert spearman_similarity(vec(transformed), vec(b)) == spearman_similarity(vec(a), vec(b))

    def test_large_zero_tie_block(self):
        rng = np.random.default_rng(5)
        a = np.zeros(5000, dtype=np.int64)
        b = np.zeros(5000, dtype=np.int64)
        a[:300] = rng.integers(1, 100, 300)
        b[100:400] = rng.integers(1, 100, 300)
        assert spearman_similarity(vec(a), vec(b)) == pytest.approx(
            naive_spearman(a.tolist(), b.tolist()), abs=1e-10)


class TestChiSquare:
    def test_identical(self):
        assert chi_square_distance(vec([3, 0, 5]), vec([3, 0, 5])) == 0.0

    def test_hand_value(self):
        # E = 2.5 in every cell: 4 * (1.5**2 / 2.5)
        assert chi_square_distance(vec([4, 1]), vec([1, 4])) == pytest.approx(3.6, abs=1e-12)

    def test_disjoint_support(self):
        value = chi_square_distance(vec([2, 0]), vec([0, 2]))
        assert value == pytest.approx(naive_chi_square([2, 0], [0, 2]), abs=1e-12)
        assert value == pytest.approx(4.0, abs=1e-12)

    def test_zero_total(self):
        with pytest.raises(ValueError):
            chi_square_distance(vec([0, 0]), vec([1, 2]))

    @settings(max_examples=300, deadline=None)
    @given(counts.flatmap(lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 50), min_size=len(a),
                                                                   max_size=len(a)))))
    def test_oracle_and_symmetry(self, pair):
        a, b = pair
        if sum(a) == 0 or sum(b) == 0:
            return
        d = chi_square_distance(vec(a), vec(b))
        assert d >= 0.0
        assert d == pytest.approx(chi_square_distance(vec(b), vec(a)), rel=1e-12, abs=1e-12)
        assert math.isclose(d, naive_chi_square(a, b), rel_tol=1e-10, abs_tol=1e-10)
