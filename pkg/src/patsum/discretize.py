"""Frequency discretization: fixed grids, greedy covers and optimal DP segmentation.

All algorithms only add, subtract, halve and compare values, so they run
unchanged on floats or on Fractions (exact).
"""
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .mining import RatedCollection, detect_closed


@dataclass
class Discretization:
    """Order-preserving map from observed values to discretization points."""

    mapping: dict
    loss: object = None
    points: tuple = field(init=False)

    def __post_init__(self):
        self.points = tuple(sorted(set(self.mapping.values())))

    def __call__(self, x):
        return self.mapping[x]

    def __len__(self):
        return len(self.points)

    @property
    def max_abs_error(self):
        return max((abs(x - d) for x, d in self.mapping.items()), default=0)

    def is_order_preserving(self):
        xs = sorted(self.mapping)
        return all(self.mapping[a] <= self.mapping[b] for a, b in zip(xs, xs[1:]))


def _check_eps(eps):
    if eps <= 0:
        raise PreconditionError("eps must be positive")


def disc_absolute(x, eps):
    """Grid point of the 2*eps wide bin holding x; error at most eps."""
    _check_eps(eps)
    if not 0 < x <= 1:
        raise PreconditionError("x must lie in (0, 1]")
    return eps + 2 * eps * math.floor(x / (2 * eps))


def tightened_eps(eps):
    """Largest eps' <= eps whose bins tile (0, 1] evenly."""
    _check_eps(eps)
    m = math.ceil(1 / (2 * (eps if isinstance(eps, float) else Fraction(eps))))
    return 1 / (2 * m) if isinstance(eps, float) else Fraction(1, 2 * m)


def disc_relative(x, eps):
    """Odd power of (1 - eps) nearest x in log scale; ratio within [1-eps, 1/(1-eps)]."""
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    if not 0 < x <= 1:
        raise PreconditionError("x must lie in (0, 1]")
    base = 1 - float(eps)
    e = 1 + 2 * math.floor(math.log(x) / (2 * math.log(base)))
    return base ** e


def _distinct_sorted(values):
    return sorted(set(values))


def interval_cover(values, eps) -> Discretization:
    """Greedy cover: repeatedly place min + eps and drop everything within 2*eps."""
    _check_eps(eps)
    rest = set(values)
    mapping = {}
    while rest:
        d = min(rest)
        point = d + eps
        covered = {x for x in rest if x <= d + 2 * eps}
        for x in covered:
            mapping[x] = point
        rest -= covered
    return Discretization(mapping)


def _check_sorted(p):
    if any(b < a for a, b in zip(p, p[1:])):
        raise PreconditionError("input must be sorted ascending")


def prefix_cover(p, eps) -> Discretization:
    """Single pass over a sorted array."""
    _check_eps(eps)
    p = list(p)
    _check_sorted(p)
    mapping = {}
    d = None
    for x in p:
        if d is None or d < x - eps:
            d = x + eps
        mapping[x] = d
    return Discretization(mapping)


def bin_cover(values, eps) -> Discretization:
    """Bin by floor(x / 2eps), then repair runs of consecutive non-empty bins.

    A bin is fully covered by one point placed eps above its minimum; that
    point may also reach into the next bin, whose leftovers start the next
    point. Only runs are walked, so no global sort is needed.
    """
    _check_eps(eps)
    bins = {}
    for x in set(values):
        bins.setdefault(math.floor(x / (2 * eps)), []).append(x)
    mapping = {}
    for start in list(bins):
        if start - 1 in bins:
            continue
        i = start
        pending = bins[i]
        while pending:
            d = min(pending)
            reach = d + 2 * eps
            for x in pending:
                if x <= reach:
                    mapping[x] = d + eps
            left = [x for x in pending if x > reach]
            nxt = bins.get(i + 1, [])
            if left:
                pending = left
                continue
            i += 1
            pending = []
            for x in nxt:
                if x <= reach:
                    mapping[x] = d + eps
                else:
                    pending.append(x)
            if not pending and i + 1 in bins and nxt:
                i += 1
                pending = list(bins[i])
    return Discretization(mapping)


def log_cover(p, eps, stats=None):
    """Greedy cover points of a sorted array via binary search.

    ``stats`` (a dict) receives the number of value comparisons made.
    """
    _check_eps(eps)
    p = list(p)
    _check_sorted(p)
    points = []
    comparisons = 0
    i, n = 0, len(p)
    while i < n:
        d = p[i] + eps
        points.append(d)
        j = n
        while j > i + 1:
            k = (i + j) // 2
            comparisons += 1
            if p[k] <= d + eps:
                i = k
            else:
                j = k
        i = j
    if stats is not None:
        stats["comparisons"] = comparisons
    return tuple(points)


def discretize_with_points(values, points):
    """Map each value to its nearest point, ties to the lower one."""
    pts = sorted(points)
    mapping = {}
    for x in set(values):
        k = bisect_right(pts, x)
        cands = pts[max(0, k - 1):k + 1]
        mapping[x] = min(cands, key=lambda d: (abs(x - d), d))
    return Discretization(mapping)


@dataclass
class ErrorMatrices:
    """``eps[i][j]`` and ``mu[i][j]`` for 1 <= i <= j <= n (row/col 0 unused)."""

    eps: list
    mu: list


@dataclass
class DPTables:
    """``delta[k][i]`` and ``omega[k][i]`` for 1 <= k <= i <= n."""

    delta: list
    omega: list


def weighted_median(values, weights):
    """Smallest value minimizing the weighted sum of absolute deviations."""
    total = sum(weights)
    acc = 0
    for x, w in zip(values, weights):
        acc += w
        if 2 * acc >= total:
            return x
    return values[-1]


def dp_valuate_abs(p, w=None) -> ErrorMatrices:
    p = list(p)
    _check_sorted(p)
    n = len(p)
    if w is None:
        w = [1] * n
    if any(x < 0 for x in w):
        raise PreconditionError("weights must be non-negative")
    eps = [[None] * (n + 1) for _ in range(n + 1)]
    mu = [[None] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            seg, ws = p[i - 1:j], w[i - 1:j]
            m = weighted_median(seg, ws)
            mu[i][j] = m
            e = 0
            for x, wx in zip(seg, ws):
                e += wx * abs(x - m)
            eps[i][j] = e
    return ErrorMatrices(eps, mu)


def dp_tabulate(p, m: ErrorMatrices, k_max=None) -> DPTables:
    """Fill delta/omega; equal losses keep the earliest split (longer last segment)."""
    n = len(p)
    k_max = n if k_max is None else min(k_max, n)
    delta = [[None] * (n + 1) for _ in range(k_max + 1)]
    omega = [[None] * (n + 1) for _ in range(k_max + 1)]
    for i in range(1, n + 1):
        delta[1][i] = m.eps[1][i]
        omega[1][i] = 0
    for k in range(2, k_max + 1):
        for i in range(k, n + 1):
            best, arg = None, None
            for j in range(k, i + 1):
                cand = delta[k - 1][j - 1] + m.eps[j][i]
                if best is None or cand < best:
                    best, arg = cand, j - 1
            delta[k][i] = best
            omega[k][i] = arg
    return DPTables(delta, omega)


def _check_k(p, t, k):
    if not 1 <= k <= len(p) or k >= len(t.delta):
        raise PreconditionError(f"k must lie in 1..{min(len(p), len(t.delta) - 1)}")


def extract_discretization(p, m: ErrorMatrices, t: DPTables, k) -> Discretization:
    _check_k(p, t, k)
    mapping = {}
    i = len(p)
    for level in range(k, 0, -1):
        j = t.omega[level][i] + 1
        for pos in range(j, i + 1):
            mapping[p[pos - 1]] = m.mu[j][i]
        i = j - 1
    return Discretization(mapping, loss=t.delta[k][len(p)])


def extract_points(p, m: ErrorMatrices, t: DPTables, k):
    _check_k(p, t, k)
    points = []
    i = len(p)
    for level in range(k, 0, -1):
        j = t.omega[level][i] + 1
        points.append(m.mu[j][i])
        i = j - 1
    return tuple(reversed(points))


def optimal_discretization(values, k, w=None) -> Discretization:
    """Best k-point discretization under the weighted sum of absolute errors."""
    p = _distinct_sorted(values)
    m = dp_valuate_abs(p, w)
    t = dp_tabulate(p, m, k_max=k)
    return extract_discretization(p, m, t, k)


def condense_by_discretization(c: RatedCollection, disc) -> RatedCollection:
    """Closed itemsets with respect to discretized frequencies."""
    relabeled = {}
    for x in c.entries:
        f = c.frequency(x)
        try:
            relabeled[x] = disc(f)
        except KeyError:
            raise PreconditionError(f"discretization undefined at {f}") from None
    return detect_closed(relabeled)
