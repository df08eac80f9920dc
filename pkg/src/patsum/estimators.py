"""scikit-learn style wrappers around the mining and discretization routines."""
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .database import TransactionDatabase
from .discretize import discretize_with_points, optimal_discretization, prefix_cover
from .itemsets import EMPTY
from .mining import (
    RatedCollection,
    free_itemsets,
    maximal_of,
    mine_closed,
    mine_frequent,
    non_derivable_itemsets,
)

KINDS = ("frequent", "closed", "free", "maximal", "ndi")


def _database(X):
    X = check_array(X, dtype=None, ensure_min_samples=1)
    if not np.isin(X, (0, 1)).all():
        raise ValueError("expected a 0/1 matrix")
    rows = [tuple(np.flatnonzero(r).tolist()) for r in X]
    return TransactionDatabase(rows, n_items=X.shape[1])


class FrequentItemsetMiner(TransformerMixin, BaseEstimator):
    """Mine itemsets from a binary transaction matrix.

    ``transform`` returns one 0/1 column per mined non-empty itemset,
    set where the row contains the itemset.
    """

    def __init__(self, min_support=0.5, kind="frequent"):
        self.min_support = min_support
        self.kind = kind

    def fit(self, X, y=None):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        db = _database(X)
        sigma = self.min_support
        if self.kind == "closed":
            coll = mine_closed(db, sigma)
        elif self.kind == "ndi":
            coll = non_derivable_itemsets(db, sigma)
        else:
            coll = mine_frequent(db, sigma)
            if self.kind == "free":
                coll = coll.restrict(free_itemsets(coll))
            elif self.kind == "maximal":
                coll = coll.restrict(maximal_of(coll))
        self.itemsets_ = coll
        self.n_features_in_ = db.n_items
        self.patterns_ = [x for x in coll.itemsets() if x != EMPTY]
        return self

    def transform(self, X):
        check_is_fitted(self, "itemsets_")
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError("column count differs from fit")
        out = np.zeros((X.shape[0], len(self.patterns_)), dtype=np.int8)
        for j, x in enumerate(self.patterns_):
            out[:, j] = X[:, list(x)].all(axis=1) if x else 1
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "itemsets_")
        names = input_features if input_features is not None else [f"x{i}" for i in range(self.n_features_in_)]
        return np.asarray(["&".join(names[i] for i in x) for x in self.patterns_], dtype=object)

    def supports(self) -> RatedCollection:
        check_is_fitted(self, "itemsets_")
        return self.itemsets_


class FrequencyDiscretizer(TransformerMixin, BaseEstimator):
    """Learn discretization points for a column of frequencies.

    ``method="greedy"`` needs ``eps`` (max absolute error); ``method="dp"``
    needs ``n_points`` (sum of absolute errors). Values seen in ``fit``
    map exactly as learned, others go to the nearest point.
    """

    def __init__(self, method="greedy", eps=None, n_points=None):
        self.method = method
        self.eps = eps
        self.n_points = n_points

    def fit(self, X, y=None):
        values = self._values(X)
        if self.method == "greedy":
            if self.eps is None:
                raise ValueError("greedy discretization needs eps")
            disc = prefix_cover(sorted(set(values)), self.eps)
        elif self.method == "dp":
            if self.n_points is None:
                raise ValueError("dp discretization needs n_points")
            disc = optimal_discretization(values, self.n_points)
        else:
            raise ValueError("method must be 'greedy' or 'dp'")
        self.discretization_ = disc
        self.points_ = np.asarray([float(p) for p in disc.points])
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "discretization_")
        values = self._values(X)
        mapping = self.discretization_.mapping
        unseen = [v for v in values if v not in mapping]
        extra = discretize_with_points(unseen, self.discretization_.points).mapping if unseen else {}
        out = [mapping[v] if v in mapping else extra[v] for v in values]
        return np.asarray([float(v) for v in out]).reshape(-1, 1)

    @staticmethod
    def _values(X):
        if isinstance(X, (list, tuple)) and X and all(isinstance(v, Fraction) for v in X):
            return list(X)
        arr = check_array(np.asarray(X, dtype=float).reshape(-1, 1) if np.ndim(X) == 1 else X)
        if arr.shape[1] != 1:
            raise ValueError("expected a single column of values")
        return arr[:, 0].tolist()
