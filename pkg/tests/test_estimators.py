from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from patsum.estimators import FrequencyDiscretizer, FrequentItemsetMiner

# D1 as a 0/1 matrix over items 0..4 (column 0 is never set)
D1 = np.array([
    [0, 1, 1, 1, 0],
    [0, 1, 1, 0, 0],
    [0, 1, 1, 1, 1],
    [0, 0, 1, 1, 0],
])


class TestMiner:
    def test_closed(self):
        m = FrequentItemsetMiner(min_support=0.5, kind="closed").fit(D1)
        assert m.patterns_ == [(2,), (1, 2), (2, 3), (1, 2, 3)]
        assert m.supports()[(1, 2)] == 3

    def test_transform(self):
        m = FrequentItemsetMiner(min_support=Fraction(1, 2)).fit(D1)
        out = m.fit_transform(D1)
        assert out.shape == (4, len(m.patterns_))
        col = m.patterns_.index((1, 2, 3))
        assert out[:, col].tolist() == [1, 0, 1, 0]

    def test_feature_names(self):
        m = FrequentItemsetMiner(min_support=1, kind="frequent").fit(D1)
        assert m.get_feature_names_out().tolist() == ["x2"]
        assert m.get_feature_names_out(list("-ABCD")).tolist() == ["B"]

    @pytest.mark.parametrize("kind,expected", [
        ("free", [(1,), (3,), (1, 3)]),
        ("maximal", [(1, 2, 3)]),
        ("ndi", [(1,), (2,), (3,), (1, 3)]),
    ])
    def test_kinds(self, kind, expected):
        assert FrequentItemsetMiner(0.5, kind).fit(D1).patterns_ == expected

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            FrequentItemsetMiner().fit(D1 * 2)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            FrequentItemsetMiner(kind="weird").fit(D1)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            FrequentItemsetMiner().transform(D1)

    def test_column_mismatch(self):
        m = FrequentItemsetMiner().fit(D1)
        with pytest.raises(ValueError):
            m.transform(D1[:, :3])

    def test_clone(self):
        m = clone(FrequentItemsetMiner(min_support=0.25, kind="closed"))
        assert m.get_params() == {"min_support": 0.25, "kind": "closed"}


class TestDiscretizer:
    def test_greedy(self):
        d = FrequencyDiscretizer(eps=0.125).fit([[0.125], [0.375], [0.625], [0.875]])
        assert d.points_.tolist() == [0.25, 0.75]
        assert d.transform([[0.125], [0.875]]).ravel().tolist() == [0.25, 0.75]

    def test_unseen_values_go_to_nearest(self):
        d = FrequencyDiscretizer(eps=0.125).fit([0.125, 0.375, 0.625, 0.875])
        assert d.transform([0.3, 0.6, 1.0]).ravel().tolist() == [0.25, 0.75, 0.75]

    def test_dp(self):
        d = FrequencyDiscretizer(method="dp", n_points=3).fit([0.1, 0.2, 0.5, 0.6, 0.9, 1.0])
        assert d.points_.tolist() == [0.1, 0.5, 0.9]
        assert d.discretization_.loss == pytest.approx(0.3)

    def test_exact_fractions(self):
        vals = [Fraction(1, 10), Fraction(3, 10), Fraction(7, 10), Fraction(9, 10)]
        d = FrequencyDiscretizer(eps=Fraction(1, 10)).fit(vals)
        assert d.discretization_.points == (Fraction(1, 5), Fraction(4, 5))

    @pytest.mark.parametrize("params", [{}, {"method": "dp"}, {"method": "other", "eps": 0.1}])
    def test_bad_params(self, params):
        with pytest.raises(ValueError):
            FrequencyDiscretizer(**params).fit([0.5])

    def test_two_columns_rejected(self):
        with pytest.raises(ValueError):
            FrequencyDiscretizer(eps=0.1).fit([[0.1, 0.2]])

    def test_pipeline(self):
        pipe = make_pipeline(FrequencyDiscretizer(method="dp", n_points=2))
        out = pipe.fit_transform([[0.1], [0.2], [0.8], [0.9]])
        assert out.ravel().tolist() == [0.1, 0.1, 0.8, 0.8]
