import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from conftest import databases
from hypothesis import given, settings
from hypothesis import strategies as st

from patsum.discretize import (
    Discretization,
    bin_cover,
    condense_by_discretization,
    disc_absolute,
    disc_relative,
    discretize_with_points,
    dp_tabulate,
    dp_valuate_abs,
    extract_discretization,
    extract_points,
    interval_cover,
    log_cover,
    optimal_discretization,
    prefix_cover,
    tightened_eps,
    weighted_median,
)
from patsum.errors import PreconditionError
from patsum.mining import association_rules, detect_closed, maximal_of, mine_frequent

FOUR = [Fraction(1, 10), Fraction(3, 10), Fraction(7, 10), Fraction(9, 10)]
SIX = [0.1, 0.2, 0.5, 0.6, 0.9, 1.0]
TENTH = Fraction(1, 10)


def min_cover_size(values, eps):
    """Fewest points within eps of every value.

    Any point can slide up until it sits eps above the smallest value it
    covers, so trying the candidates x + eps loses nothing.
    """
    vals = sorted(set(values))
    cands = [x + eps for x in vals]
    for k in range(len(vals) + 1):
        for pts in combinations(cands, k):
            if all(any(abs(x - d) <= eps for d in pts) for x in vals):
                return k
    raise AssertionError("unreachable")


def min_sumabs_loss(values, k):
    """Best k centers chosen among the data, each value paying its nearest center."""
    vals = sorted(set(values))
    return min(
        sum(min(abs(x - d) for d in centers) for x in vals)
        for centers in combinations(vals, k)
    )


rationals = st.fractions(min_value=Fraction(1, 50), max_value=1, max_denominator=50)


class TestGrids:
    def test_absolute(self):
        assert disc_absolute(0.5, 0.1) == pytest.approx(0.5)
        assert disc_absolute(0.19, 0.1) == pytest.approx(0.1)
        for x in (0.01, 0.3, 0.99):
            assert disc_absolute(x, 0.5) == 0.5

    def test_absolute_exact(self):
        assert disc_absolute(Fraction(1, 2), TENTH) == Fraction(1, 2)

    def test_tightened(self):
        assert tightened_eps(Fraction(3, 20)) == Fraction(1, 8)
        assert tightened_eps(TENTH) == TENTH

    def test_relative(self):
        assert disc_relative(1.0, 0.5) == 0.5
        assert disc_relative(0.75, 0.25) == pytest.approx(0.75)

    @pytest.mark.parametrize("x,eps", [(0, 0.1), (1.5, 0.1), (0.5, 0)])
    def test_domain(self, x, eps):
        with pytest.raises(PreconditionError):
            disc_absolute(x, eps)

    @settings(max_examples=200)
    @given(st.floats(1e-6, 1.0), st.floats(1e-3, 0.5))
    def test_absolute_error(self, x, eps):
        assert abs(disc_absolute(x, eps) - x) <= eps + 1e-12

    @settings(max_examples=200)
    @given(st.floats(1e-6, 1.0), st.floats(1e-3, 0.9))
    def test_relative_ratio(self, x, eps):
        r = disc_relative(x, eps) / x
        assert 1 - eps - 1e-12 <= r <= 1 / (1 - eps) + 1e-12


class TestCovers:
    def test_example(self):
        for f in (interval_cover, prefix_cover, bin_cover):
            d = f(FOUR, TENTH)
            assert d.points == (Fraction(1, 5), Fraction(4, 5))
            assert d.mapping == {
                Fraction(1, 10): Fraction(1, 5), Fraction(3, 10): Fraction(1, 5),
                Fraction(7, 10): Fraction(4, 5), Fraction(9, 10): Fraction(4, 5),
            }
        assert log_cover(FOUR, TENTH) == (Fraction(1, 5), Fraction(4, 5))

    def test_single_value(self):
        assert prefix_cover([Fraction(1, 3)], TENTH).points == (Fraction(1, 3) + TENTH,)

    def test_ten_values(self):
        # spacing 1/10 exceeds the 2*eps reach at eps=1/25, so no point covers two values
        vals = [Fraction(i, 10) for i in range(1, 11)]
        assert len(interval_cover(vals, Fraction(4, 100))) == 10 == min_cover_size(vals, Fraction(4, 100))
        assert len(interval_cover(vals, Fraction(1, 20))) == 5

    def test_empty(self):
        assert prefix_cover([], TENTH).points == ()
        assert log_cover([], TENTH) == ()

    def test_all_equal(self):
        assert len(bin_cover([Fraction(1, 2)] * 5, TENTH)) == 1

    def test_duplicates_collapse(self):
        assert interval_cover(FOUR + FOUR, TENTH).mapping == interval_cover(FOUR, TENTH).mapping

    def test_unsorted_rejected(self):
        with pytest.raises(PreconditionError):
            prefix_cover(list(reversed(FOUR)), TENTH)
        with pytest.raises(PreconditionError):
            log_cover(list(reversed(FOUR)), TENTH)

    def test_log_cover_on_dense_grid(self):
        p = [Fraction(i, 1024) for i in range(1, 1025)]
        eps = Fraction(1, 1000)
        stats = {}
        assert log_cover(p, eps, stats) == prefix_cover(p, eps).points
        k = len(prefix_cover(p, eps))
        assert stats["comparisons"] <= k * math.ceil(math.log2(len(p) + 1))

    @settings(max_examples=150, deadline=None)
    @given(st.lists(rationals, min_size=1, max_size=10), st.sampled_from([Fraction(1, 50), TENTH, Fraction(1, 4)]))
    def test_greedy_is_minimum(self, values, eps):
        p = sorted(set(values))
        expected = min_cover_size(p, eps)
        assert len(prefix_cover(p, eps)) == expected
        assert len(interval_cover(values, eps)) == expected
        assert len(bin_cover(values, eps)) == expected
        assert len(log_cover(p, eps)) == expected

    @settings(max_examples=150, deadline=None)
    @given(st.lists(rationals, min_size=1, max_size=30), st.sampled_from([Fraction(1, 50), TENTH, Fraction(1, 3)]))
    def test_covers_agree_and_bound_error(self, values, eps):
        p = sorted(set(values))
        d = prefix_cover(p, eps)
        assert d.max_abs_error <= eps
        assert d.is_order_preserving()
        assert interval_cover(values, eps).mapping == d.mapping
        assert bin_cover(values, eps).mapping == d.mapping
        assert log_cover(p, eps) == d.points

    def test_float_input(self):
        d = prefix_cover([0.125, 0.375, 0.625, 0.875], 0.125)
        assert d.points == (0.25, 0.75)

    def test_nearest_point(self):
        d = discretize_with_points([0.125, 0.5, 0.625, 1.0], [0.25, 0.75])
        # 0.5 is equidistant and goes to the lower point
        assert d.mapping == {0.125: 0.25, 0.5: 0.25, 0.625: 0.75, 1.0: 0.75}


class TestDP:
    def test_weighted_median(self):
        assert weighted_median([1, 2, 3, 4], [1, 1, 1, 1]) == 2
        assert weighted_median([1, 2, 3], [1, 1, 5]) == 3

    def test_six_points(self):
        m = dp_valuate_abs(SIX)
        t = dp_tabulate(SIX, m)
        assert t.delta[3][6] == pytest.approx(0.3, abs=1e-12)
        assert t.delta[6][6] == 0
        assert t.delta[1][6] == m.eps[1][6]
        assert extract_points(SIX, m, t, 3) == (0.1, 0.5, 0.9)
        assert extract_points(SIX, m, t, 6) == tuple(SIX)
        assert extract_points(SIX, m, t, 1) == (0.5,)

    def test_segments(self):
        d = optimal_discretization(SIX, 3)
        assert d.mapping == {0.1: 0.1, 0.2: 0.1, 0.5: 0.5, 0.6: 0.5, 0.9: 0.9, 1.0: 0.9}
        assert d.loss == pytest.approx(0.3, abs=1e-12)

    def test_identity_at_full_k(self):
        d = optimal_discretization(FOUR, 4)
        assert d.mapping == {x: x for x in FOUR}
        assert d.loss == 0

    def test_ties_prefer_longer_last_segment(self):
        # two equal-cost splits of {1,2,3}: {1}{2,3} wins over {1,2}{3}
        m = dp_valuate_abs([1, 2, 3])
        t = dp_tabulate([1, 2, 3], m)
        assert t.omega[2][3] == 1
        assert extract_discretization([1, 2, 3], m, t, 2).mapping == {1: 1, 2: 2, 3: 2}

    def test_k_out_of_range(self):
        m = dp_valuate_abs(SIX)
        t = dp_tabulate(SIX, m, k_max=2)
        with pytest.raises(PreconditionError):
            extract_discretization(SIX, m, t, 3)

    def test_negative_weight(self):
        with pytest.raises(PreconditionError):
            dp_valuate_abs([1, 2], [1, -1])

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=8, unique=True), st.data())
    def test_dp_is_optimal(self, values, data):
        k = data.draw(st.integers(1, len(values)))
        d = optimal_discretization(values, k)
        assert d.loss == pytest.approx(min_sumabs_loss(values, k), abs=1e-12)
        assert sum(abs(x - y) for x, y in d.mapping.items()) == pytest.approx(d.loss, abs=1e-12)
        assert d.is_order_preserving()
        assert len(d.points) <= k

    def test_exact_on_fractions(self):
        vals = [Fraction(i, 7) for i in range(1, 7)]
        d = optimal_discretization(vals, 2)
        assert d.loss == min_sumabs_loss(vals, 2)
        assert isinstance(d.loss, Fraction)


class TestCondense:
    def test_single_point_gives_maximal(self, d1):
        c = mine_frequent(d1, Fraction(1, 4))
        one = Discretization({f: Fraction(1, 2) for f in set(c.frequencies().values())})
        assert set(condense_by_discretization(c, one).entries) == maximal_of(c)

    def test_identity_gives_closed(self, d1):
        c = mine_frequent(d1, Fraction(1, 4))
        ident = Discretization({f: f for f in set(c.frequencies().values())})
        assert set(condense_by_discretization(c, ident).entries) == set(detect_closed(c).entries)


class TestRuleAccuracyBounds:
    @settings(max_examples=60, deadline=None)
    @given(databases(max_items=5, min_rows=1), st.sampled_from([Fraction(1, 50), TENTH, Fraction(1, 5)]))
    def test_absolute(self, db, eps):
        c = mine_frequent(db, Fraction(1, 10))
        freq = c.frequencies()
        disc = prefix_cover(sorted(set(freq.values())), eps)
        for r in association_rules(c):
            fx = freq[r.body]
            approx = disc(freq[tuple(sorted(r.body + r.head))]) / disc(fx)
            assert abs(approx - r.accuracy) <= min(1, 2 * eps / fx)

    @settings(max_examples=60, deadline=None)
    @given(databases(max_items=5, min_rows=1), st.sampled_from([0.05, 0.1, 0.3]))
    def test_relative(self, db, eps):
        c = mine_frequent(db, Fraction(1, 10))
        freq = c.frequencies()
        for r in association_rules(c):
            y = tuple(sorted(r.body + r.head))
            approx = disc_relative(float(freq[y]), eps) / disc_relative(float(freq[r.body]), eps)
            ratio = approx / float(r.accuracy)
            assert (1 - eps) ** 2 - 1e-12 <= ratio <= (1 - eps) ** -2 + 1e-12


def test_random_batch_against_exhaustive():
    rng = random.Random(11)
    for _ in range(30):
        vals = sorted({Fraction(rng.randint(1, 40), 40) for _ in range(rng.randint(1, 8))})
        eps = Fraction(rng.randint(1, 8), 80)
        assert len(prefix_cover(vals, eps)) == min_cover_size(vals, eps)
        k = rng.randint(1, len(vals))
        assert optimal_discretization(vals, k).loss == min_sumabs_loss(vals, k)
        assert math.isfinite(float(optimal_discretization(vals, k).loss))
