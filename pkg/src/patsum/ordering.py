"""Greedy pattern ordering under pluggable estimators and losses."""
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import PreconditionError
from .itemsets import EMPTY, is_subset, key
from .mining import RatedCollection, detect_closed

MAX_BRUTE_FORCE_PATTERNS = 18


# estimators ---------------------------------------------------------------

class ZeroDefault:
    """Known values are exact, everything else is estimated as 0."""

    name = "zero-default"

    def estimate(self, x, selected):
        return selected.get(x, 0)

    def affected(self, p, patterns):
        return [p]


class MaxSuperset:
    """Largest value among the selected supersets, 0 if there are none."""

    name = "max-superset"

    def estimate(self, x, selected):
        return max((v for y, v in selected.items() if is_subset(x, y)), default=0)

    def affected(self, p, patterns):
        return [x for x in patterns if is_subset(x, p)]


class Independence:
    """Product of singleton values, ``delta`` for singletons not selected.

    Selected itemsets keep their own value.
    """

    name = "independence"

    def __init__(self, delta=0.5):
        if not 0 <= delta <= 1:
            raise PreconditionError("delta must lie in [0, 1]")
        self.delta = delta

    def estimate(self, x, selected):
        if x in selected:
            return selected[x]
        out = 1
        for a in x:
            out *= selected.get((a,), self.delta)
        return out

    def affected(self, p, patterns):
        if len(p) == 1:
            return [x for x in patterns if p[0] in x]
        return [p]


ESTIMATORS = {"zero-default": ZeroDefault, "max-superset": MaxSuperset, "independence": Independence}


# losses -------------------------------------------------------------------

class SquaredErrorSum:
    name = "squared-error-sum"

    def term(self, e):
        return e * e

    def finish(self, total):
        return total


class LpLoss:
    """(sum |e|^p)^(1/p); p = inf gives the maximum absolute error."""

    def __init__(self, p=2):
        if p < 1:
            raise PreconditionError("p must be at least 1")
        self.p = p
        self.name = f"lp({p})"

    def term(self, e):
        return abs(e) ** self.p if self.p != math.inf else abs(e)

    def finish(self, total):
        if self.p in (1, math.inf):
            return total
        return total ** (1 / self.p)

    def combine(self, terms):
        if self.p == math.inf:
            return max(terms, default=0)
        return self.finish(sum(terms))


class CountExceeding:
    """Number of patterns whose absolute error exceeds eps."""


    def __init__(self, eps):
        self.eps = eps
        self.name = f"count-exceeding({eps})"

    def term(self, e):
        return 1 if abs(e) > self.eps else 0

    def finish(self, total):
        return total


def _combine(loss, terms):
    if hasattr(loss, "combine"):
        return loss.combine(terms)
    return loss.finish(sum(terms))


def evaluate_loss(values, selected, estimator, loss, include_empty=False):
    """Loss of estimating every pattern in ``values`` from ``selected``."""
    vals = _pattern_values(values, include_empty)
    everything = _values(values)
    chosen = {x: everything[x] for x in selected}
    terms = [loss.term(v - estimator.estimate(x, chosen)) for x, v in vals.items()]
    return _combine(loss, terms)


# ordering -----------------------------------------------------------------

@dataclass
class PatternOrdering:
    sequence: list
    prefix_loss: list


def _values(c):
    return c.entries if isinstance(c, RatedCollection) else dict(c)


def _pattern_values(c, include_empty):
    vals = _values(c)
    return {x: vals[x] for x in sorted(vals, key=key) if include_empty or x != EMPTY}


def order_patterns(values, estimator, loss, include_empty=False, k=None, naive=False):
    """Greedy ordering: each step adds the pattern giving the smallest loss.

    Ties go to the smallest pattern by (cardinality, lex). With
    ``naive=True`` every candidate is evaluated from scratch, otherwise
    only the estimates the candidate can change are recomputed.
    """
    vals = _pattern_values(values, include_empty)
    patterns = list(vals)
    index = {x: i for i, x in enumerate(patterns)}
    selected = {}
    terms = [loss.term(vals[x] - estimator.estimate(x, selected)) for x in patterns]
    seq = []
    prefix = [_combine(loss, terms)]
    remaining = list(patterns)
    affected = {}
    steps = len(patterns) if k is None else min(k, len(patterns))
    for _ in range(steps):
        best = None
        for p in remaining:
            trial = dict(selected)
            trial[p] = vals[p]
            if naive:
                t = [loss.term(vals[x] - estimator.estimate(x, trial)) for x in patterns]
            else:
                if p not in affected:
                    affected[p] = [index[x] for x in estimator.affected(p, patterns)]
                t = list(terms)
                for i in affected[p]:
                    t[i] = loss.term(vals[patterns[i]] - estimator.estimate(patterns[i], trial))
            value = _combine(loss, t)
            if best is None or value < best[0]:
                best = (value, p, t)
        value, p, terms = best
        selected[p] = vals[p]
        remaining.remove(p)
        seq.append(p)
        prefix.append(value)
    return PatternOrdering(seq, prefix)


def best_k_bruteforce(values, estimator, loss, k, include_empty=False):
    """Exact best k-subcollection by enumerating all k-subsets."""
    vals = _pattern_values(values, include_empty)
    patterns = list(vals)
    if len(patterns) > MAX_BRUTE_FORCE_PATTERNS:
        raise PreconditionError(f"brute force limited to {MAX_BRUTE_FORCE_PATTERNS} patterns")
    if not 0 <= k <= len(patterns):
        raise PreconditionError("k out of range")
    best = None
    for combo in combinations(patterns, k):
        chosen = {x: vals[x] for x in combo}
        terms = [loss.term(v - estimator.estimate(x, chosen)) for x, v in vals.items()]
        value = _combine(loss, terms)
        if best is None or value < best[1]:
            best = (list(combo), value)
    return best


@dataclass
class GuaranteeReport:
    initial_loss: object
    greedy_decrease: list
    optimal_decrease: list
    ratios: list
    worst_ratio: float

    @property
    def holds(self):
        return self.worst_ratio >= 1 - 1 / math.e


def _ratio(a, b):
    if b == 0:
        return Fraction(1)
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) / Fraction(b)
    return a / b


def _is_sum_of_monotone(loss):
    if isinstance(loss, (SquaredErrorSum, CountExceeding)):
        return True
    return isinstance(loss, LpLoss) and loss.p == 1


def verify_guarantee(values, loss, k_max, estimator=None, include_empty=False):
    """Compare greedy and optimal loss decrease for k = 1..k_max.

    Only defined for the max-superset estimator with a loss that sums a
    nondecreasing function of each absolute error.
    """
    estimator = estimator or MaxSuperset()
    if not isinstance(estimator, MaxSuperset):
        raise PreconditionError("the guarantee needs the max-superset estimator")
    if not _is_sum_of_monotone(loss):
        raise PreconditionError("the guarantee needs a sum of nondecreasing per-pattern errors")
    order = order_patterns(values, estimator, loss, include_empty, k=k_max)
    l0 = order.prefix_loss[0]
    greedy, optimal, ratios = [], [], []
    for k in range(1, min(k_max, len(order.sequence)) + 1):
        g = l0 - order.prefix_loss[k]
        o = l0 - best_k_bruteforce(values, estimator, loss, k, include_empty)[1]
        greedy.append(g)
        optimal.append(o)
        ratios.append(_ratio(g, o))
    worst = min(ratios, default=1)
    return GuaranteeReport(l0, greedy, optimal, ratios, worst)


def closed_patterns_needed(c, include_empty=False):
    """Non-empty closed members: the smallest subcollection with zero max-superset loss."""
    closed = detect_closed(c)
    return {x for x in closed.entries if include_empty or x != EMPTY}
