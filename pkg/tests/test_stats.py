import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpsim.stats import descriptive_stats, spearman_rank_correlation, welch_t_test

from oracles import exact_permutation_p, naive_spearman

WELCH = json.loads((Path(__file__).parent / "data" / "welch_reference.json").read_text())["cases"]

reals = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


class TestSpearmanTest:
    def test_identity(self):
        r = spearman_rank_correlation([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
        assert r.statistic == 1.0
        assert r.p_value == pytest.approx(2 / 120)

    def test_n4_matches_enumeration(self):
        xs, ys = [0.3, 1.7, 0.9, 2.2], [5.0, 4.1, 6.3, 1.0]
        assert spearman_rank_correlation(xs, ys).p_value == float(exact_permutation_p(xs, ys))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_exact_for_small_n_with_ties(self, n):
        rng = np.random.default_rng(n)
        for _ in range(15):
            xs = rng.integers(0, 4, n).tolist()
            ys = rng.integers(0, 4, n).tolist()
            if len(set(xs)) < 2 or len(set(ys)) < 2:
                continue
            r = spearman_rank_correlation(xs, ys)
            assert r.p_value == float(exact_permutation_p(xs, ys))
            assert r.statistic == pytest.approx(naive_spearman(xs, ys), abs=1e-12)

    def test_large_n_uses_t_approximation(self):
        rng = np.random.default_rng(1)
        xs, ys = rng.normal(size=30), rng.normal(size=30)
        r = spearman_rank_correlation(xs, ys)
        assert r.method == "t-approximation"
        from scipy import stats
        ref = stats.spearmanr(xs, ys)
        assert r.statistic == pytest.approx(ref.statistic, abs=1e-12)
        assert r.p_value == pytest.approx(ref.pvalue, rel=1e-9)

    def test_errors(self):
        with pytest.raises(ValueError):
            spearman_rank_correlation([1, 1, 1], [1, 2, 3])
        with pytest.raises(ValueError):
            spearman_rank_correlation([1, 2], [2, 1])
        with pytest.raises(ValueError):
            spearman_rank_correlation([1, 2, 3], [1, 2])

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.tuples(reals, reals), min_size=3, max_size=12))
    def test_monotone_invariance_and_range(self, pairs):
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        if len(set(xs)) < 2 or len(set(ys)) < 2:
            return
        r = spearman_rank_correlation(xs, ys)
        assert 0.0 <= r.p_value <= 1.0 and -1.0 <= r.statistic <= 1.0
        assert r.significant == (r.p_value < 0.05)
        t = spearman_rank_correlation([x ** 3 + 2 * x for x in xs], ys)
        assert (t.statistic, t.p_value) == (r.statistic, r.p_value)


class TestWelch:
    @pytest.mark.parametrize("case", WELCH[:20], ids=lambda c: f"n{len(c['a'])}x{len(c['b'])}")
    def test_reference(self, case):
        r = welch_t_test(case["a"], case["b"])
        assert r.statistic == pytest.approx(case["t"], abs=1e-9)
        assert r.df == pytest.approx(case["df"], abs=1e-9)
        assert r.p_value == pytest.approx(case["p"], abs=1e-9)

    def test_equal_lists(self):
        r = welch_t_test([1.0, 2.0, 4.0], [1.0, 2.0, 4.0])
        assert r.statistic == 0.0 and r.p_value == 1.0 and not r.significant

    def test_clear_difference_is_significant(self):
        rng = np.random.default_rng(0)
        a = rng.normal(0.84, 0.01, 50)
        b = rng.normal(0.81, 0.01, 50)
        assert welch_t_test(a, b).significant

    def test_degenerate(self):
        with pytest.raises(ValueError):
            welch_t_test([2.0, 2.0], [2.0, 2.0])
        with pytest.raises(ValueError):
            welch_t_test([1.0], [1.0, 2.0])

    @settings(max_examples=150, deadline=None)
    @given(st.lists(reals, min_size=2, max_size=30), st.lists(reals, min_size=2, max_size=30))
    def test_antisymmetry(self, a, b):
        if np.var(a) == 0 and np.var(b) == 0:
            return
        ab, ba = welch_t_test(a, b), welch_t_test(b, a)
        assert ab.statistic == -ba.statistic
        assert ab.p_value == ba.p_value
        assert 0.0 <= ab.p_value <= 1.0


class TestDescriptive:
    def test_basic(self):
        s = descriptive_stats([1, 2, 3])
        assert (s.mean, s.min, s.max, s.median) == (2, 1, 3, 2)
        assert s.sd == 1.0

    def test_single(self):
        s = descriptive_stats([5])
        assert s.sd == 0.0 and s.single_observation and s.q1 == s.q3 == 5

    def test_skewed(self):
        s = descriptive_stats([1, 1, 1, 9])
        assert s.median == 1 and s.mean == 3

    def test_quartiles_linear(self):
        s = descriptive_stats([1, 2, 3, 4])
        assert (s.q1, s.q3) == (1.75, 3.25)

    def test_empty(self):
        with pytest.raises(ValueError):
            descriptive_stats([])


def test_permutation_oracle_self_check():
    # the oracle itself: perfectly ordered n=3 gives 2 extreme pairings of 6
    assert exact_permutation_p([1, 2, 3], [1, 2, 3]) == Fraction(2, 6)
    assert len(list(itertools.permutations(range(4)))) == 24
