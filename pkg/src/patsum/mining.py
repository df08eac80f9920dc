"""Frequent, closed, free, maximal and non-derivable itemsets."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .database import TransactionDatabase
from .errors import PreconditionError
from .itemsets import EMPTY, difference, immediate_subsets, is_proper_subset, key, union
from .numbers import as_fraction

MAX_BRUTE_FORCE_ITEMS = 20


class RatedCollection:
    """Itemsets with a rating each, normally an integer support.

    ``n`` is the database size used to turn supports into frequencies.
    Ratings may also be other comparable numbers (for example discretized
    frequencies), in which case ``n`` can be None.
    """

    def __init__(self, entries, n=None, downward_closed=False):
        self.entries = dict(entries)
        self.n = n
        self.downward_closed = downward_closed
        self.minimal_infrequent = None

    def __contains__(self, x):
        return x in self.entries

    def __getitem__(self, x):
        return self.entries[x]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.itemsets())

    def __eq__(self, other):
        if isinstance(other, RatedCollection):
            return self.entries == other.entries and self.n == other.n
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{x}: {v}" for x, v in self.items())
        return f"RatedCollection({{{body}}}, n={self.n})"

    def itemsets(self):
        """Members sorted by (cardinality, lex)."""
        return sorted(self.entries, key=key)

    def items(self):
        return [(x, self.entries[x]) for x in self.itemsets()]

    def frequency(self, x):
        if not self.n:
            raise PreconditionError("frequency is undefined without a positive database size")
        return Fraction(self.entries[x], self.n)

    def frequencies(self):
        return {x: self.frequency(x) for x in self.entries}

    def restrict(self, itemsets):
        keep = set(itemsets)
        return RatedCollection(
            {x: v for x, v in self.entries.items() if x in keep}, n=self.n
        )


def _values(c):
    return c.entries if isinstance(c, RatedCollection) else dict(c)


def _threshold(sigma):
    sigma = as_fraction(sigma)
    if sigma <= 0:
        raise PreconditionError("sigma must be positive")
    if sigma > 1:
        raise PreconditionError("sigma must be at most 1")
    return sigma


def _is_frequent(supp, n, sigma):
    return supp * sigma.denominator >= sigma.numerator * n


def _join(level):
    """Apriori prefix join plus subset pruning over a sorted level."""
    present = set(level)
    out = []
    for i, a in enumerate(level):
        for b in level[i + 1:]:
            if a[:-1] != b[:-1]:
                break
            cand = a + (b[-1],)
            if all(s in present for s in immediate_subsets(cand)):
                out.append(cand)
    return out


def mine_frequent(db: TransactionDatabase, sigma) -> RatedCollection:
    """Levelwise (Apriori) mining of all itemsets with frequency >= sigma.

    The candidates that were counted and failed are kept on the result as
    ``minimal_infrequent``.
    """
    sigma = _threshold(sigma)
    n = len(db)
    if n == 0:
        out = RatedCollection({EMPTY: 0}, n=0, downward_closed=True)
        out.minimal_infrequent = set()
        return out
    entries = {EMPTY: n}
    border = set()
    level = []
    for i in range(db.n_items):
        s = db.support((i,))
        if _is_frequent(s, n, sigma):
            entries[(i,)] = s
            level.append((i,))
        else:
            border.add((i,))
    while level:
        nxt = []
        for cand in _join(level):
            s = db.support(cand)
            if _is_frequent(s, n, sigma):
                entries[cand] = s
                nxt.append(cand)
            else:
                border.add(cand)
        level = nxt
    out = RatedCollection(entries, n=n, downward_closed=True)
    out.minimal_infrequent = border
    return out


def mine_brute_force(db: TransactionDatabase, sigma) -> RatedCollection:
    """Count every subset of the universe directly. Reference oracle."""
    sigma = _threshold(sigma)
    if db.n_items > MAX_BRUTE_FORCE_ITEMS:
        raise PreconditionError(f"brute force limited to {MAX_BRUTE_FORCE_ITEMS} items")
    n = len(db)
    if n == 0:
        return RatedCollection({EMPTY: 0}, n=0, downward_closed=True)
    rows = [set(t) for t in db]
    entries = {}
    for r in range(db.n_items + 1):
        for x in combinations(range(db.n_items), r):
            s = sum(1 for t in rows if t.issuperset(x))
            if _is_frequent(s, n, sigma):
                entries[x] = s
    return RatedCollection(entries, n=n, downward_closed=True)


def closure_of(x, db: TransactionDatabase):
    return db.closure(x)


def mine_closed(db: TransactionDatabase, sigma) -> RatedCollection:
    """Levelwise closed itemset mining: close X plus one frequent item."""
    sigma = _threshold(sigma)
    n = len(db)
    if n == 0:
        return RatedCollection({EMPTY: 0}, n=0)
    frequent_items = [
        i for i in range(db.n_items) if _is_frequent(db.support((i,)), n, sigma)
    ]
    start = db.closure(EMPTY)
    closed = {start: n}
    level = [start]
    while level:
        found = set()
        for x in level:
            xs = set(x)
            for a in frequent_items:
                if a in xs:
                    continue
                s = db.support(union(x, (a,)))
                if not _is_frequent(s, n, sigma):
                    continue
                c = db.closure(union(x, (a,)))
                if c not in closed:
                    found.add(c)
                    closed[c] = s
        level = sorted(found, key=key)
    return RatedCollection(closed, n=n)


def check_anti_monotone(c):
    """Raise unless ``c`` is downward closed with anti-monotone ratings."""
    vals = _values(c)
    for x, v in vals.items():
        for y in immediate_subsets(x):
            if y not in vals:
                raise PreconditionError(f"collection is not downward closed: {y} missing")
            if vals[y] < v:
                raise PreconditionError(f"ratings are not anti-monotone at {y} < {x}")


def _immediate_supersets(vals):
    sup = {x: [] for x in vals}
    for x in vals:
        for y in immediate_subsets(x):
            if y in sup:
                sup[y].append(x)
    return sup


def detect_closed(c) -> RatedCollection:
    """Members whose every proper superset in the collection rates strictly lower."""
    check_anti_monotone(c)
    vals = _values(c)
    sup = _immediate_supersets(vals)
    keep = {x: v for x, v in vals.items() if all(vals[y] < v for y in sup[x])}
    n = c.n if isinstance(c, RatedCollection) else None
    return RatedCollection(keep, n=n)


def free_itemsets(c):
    """Members whose every proper subset rates strictly higher."""
    check_anti_monotone(c)
    vals = _values(c)
    return {x for x, v in vals.items() if all(vals[y] > v for y in immediate_subsets(x))}


def maximal_of(c):
    """Members with no proper superset in the collection."""
    vals = _values(c)
    if isinstance(c, RatedCollection) and c.downward_closed:
        sup = _immediate_supersets(vals)
        return {x for x in vals if not sup[x]}
    members = sorted(vals, key=key, reverse=True)
    out = set()
    for x in members:
        if not any(is_proper_subset(x, y) for y in out):
            out.add(x)
    return out


def minimal_infrequent(db: TransactionDatabase, sigma):
    if len(db) == 0:
        raise PreconditionError("frequency is undefined on an empty database")
    return set(mine_frequent(db, sigma).minimal_infrequent)


@dataclass(frozen=True)
class AssociationRule:
    body: tuple
    head: tuple
    support: int
    accuracy: Fraction


def association_rules(c: RatedCollection, min_accuracy=0, skipped=None):
    """Every rule X -> Y \\ X for X a proper subset of Y, both in ``c``.

    Rules whose body has zero support are left out; pass a list as
    ``skipped`` to collect their (body, head) pairs.
    """
    min_accuracy = as_fraction(min_accuracy)
    vals = _values(c)
    rules = []
    for y in sorted(vals, key=key):
        for r in range(len(y)):
            for x in combinations(y, r):
                if x not in vals:
                    continue
                head = difference(y, x)
                if vals[x] == 0:
                    if skipped is not None:
                        skipped.append((x, head))
                    continue
                acc = Fraction(vals[y], vals[x])
                if acc >= min_accuracy:
                    rules.append(AssociationRule(x, head, vals[y], acc))
    return rules


@dataclass(frozen=True)
class DerivabilityBounds:
    lower: Fraction
    upper: Fraction

    @property
    def derivable(self):
        return self.lower == self.upper


def derivability_bounds(x, freq) -> DerivabilityBounds:
    """Inclusion-exclusion bounds on fr(x) from the frequencies of its proper subsets.

    ``freq`` maps itemsets to frequencies; a RatedCollection with a
    database size or a TransactionDatabase also work.
    """
    fr = _frequency_lookup(freq)
    if not x:
        return DerivabilityBounds(Fraction(0), Fraction(1))
    sub = {}
    for r in range(len(x)):
        for z in combinations(x, r):
            try:
                sub[z] = fr(z)
            except KeyError:
                raise PreconditionError(f"missing rating for subset {z} of {x}") from None
    lower, upper = Fraction(0), Fraction(1)
    k = len(x)
    for r in range(k):
        for y in combinations(x, r):
            rest = difference(x, y)
            total = Fraction(0)
            for t in range(len(rest)):
                for extra in combinations(rest, t):
                    z = union(y, extra)
                    sign = 1 if (k - len(z) + 1) % 2 == 0 else -1
                    total += sign * sub[z]
            if (k - r) % 2:
                upper = min(upper, total)
            else:
                lower = max(lower, total)
    return DerivabilityBounds(lower, upper)


def _frequency_lookup(freq):
    if isinstance(freq, TransactionDatabase):
        return freq.frequency
    if isinstance(freq, RatedCollection):
        return freq.frequency
    return freq.__getitem__


def non_derivable_itemsets(db: TransactionDatabase, sigma=None) -> RatedCollection:
    """Levelwise search of itemsets whose bounds are not tight.

    With ``sigma`` only frequent non-derivable itemsets are kept; both
    collections are downward closed so the levelwise pruning stays valid.
    """
    n = len(db)
    if n == 0:
        return RatedCollection({EMPTY: 0}, n=0, downward_closed=True)
    if sigma is not None:
        sigma = _threshold(sigma)
    entries = {EMPTY: n}
    level = [EMPTY]
    depth = 0
    while level:
        nxt = []
        cands = [(i,) for i in range(db.n_items)] if depth == 0 else _join(level)
        for cand in cands:
            s = db.support(cand)
            if sigma is not None and not _is_frequent(s, n, sigma):
                continue
            b = derivability_bounds(cand, db)
            if b.lower < b.upper:
                entries[cand] = s
                nxt.append(cand)
        level = nxt
        depth += 1
    return RatedCollection(entries, n=n, downward_closed=True)


def ndi_depth_bound(n):
    """Largest possible size of a non-derivable itemset in a database of n rows."""
    return n.bit_length()
