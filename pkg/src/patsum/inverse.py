"""Inverse frequent itemset mining: projections, compatibility and reconstruction."""
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import factorial, prod

from .database import TransactionDatabase
from .errors import IncompatibleError, ParseError, PreconditionError
from .itemsets import EMPTY, intersection, is_subset, key, parse_itemset, union
from .mining import RatedCollection, check_anti_monotone, maximal_of


@dataclass
class Projection:
    """Rows of a database restricted to the items of ``onto``."""

    onto: tuple
    rows: list

    def __post_init__(self):
        self.onto = tuple(sorted(self.onto))
        self.rows = [tuple(sorted(r)) for r in self.rows]
        for r in self.rows:
            if not is_subset(r, self.onto):
                raise PreconditionError(f"row {r} is not inside {self.onto}")

    def __len__(self):
        return len(self.rows)

    def multiset(self):
        return Counter(self.rows)

    def equivalent(self, other):
        return self.onto == other.onto and self.multiset() == other.multiset()

    def restrict(self, items):
        return Counter(intersection(r, items) for r in self.rows)

    def support(self, x):
        return sum(1 for r in self.rows if is_subset(x, r))


def project(db: TransactionDatabase, x) -> Projection:
    return Projection(x, [intersection(t, x) for t in db])


def to_projections(claim: RatedCollection):
    """One projection per maximal claimed itemset, peeled top-down.

    Within the sub-lattice of a maximal itemset, each itemset's residual
    count is the number of rows equal to it; that count is subtracted from
    every proper subset before the subset is visited.
    """
    check_anti_monotone(claim)
    vals = claim.entries
    if EMPTY not in vals:
        raise PreconditionError("claim must rate the empty itemset")
    n = vals[EMPTY]
    if any(v > n or v < 0 for v in vals.values()):
        raise PreconditionError("supports must lie between 0 and the support of the empty set")
    out = []
    for m in sorted(maximal_of(vals), key=key):
        residual = {}
        for r in range(len(m) + 1):
            for y in combinations(m, r):
                residual[y] = vals[y]
        rows = []
        for y in sorted(residual, key=key, reverse=True):
            c = residual[y]
            if c < 0:
                raise IncompatibleError(f"claim is inconsistent: {c} rows equal to {y} inside {m}")
            rows.extend([y] * c)
            for r in range(len(y)):
                for z in combinations(y, r):
                    residual[z] -= c
        out.append(Projection(m, sorted(rows, key=key)))
    return out


def projections_compatible(projections):
    """Pairwise agreement of the row multisets on every shared item set."""
    ps = list(projections)
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            common = intersection(ps[i].onto, ps[j].onto)
            if ps[i].restrict(common) != ps[j].restrict(common):
                return False
    return True


def _universe(items):
    return (max(items) + 1) if items else 0


def _groups(p, other):
    g = {}
    for r in p.rows:
        g.setdefault(intersection(r, other), []).append(r)
    return g


def from_two_to_one(p1: Projection, p2: Projection) -> TransactionDatabase:
    """Group both projections by their rows on the shared items, then zip groups.

    Raises IncompatibleError when the groups do not line up.
    """
    if len(p1) != len(p2):
        raise IncompatibleError("projections have different row counts")
    g1, g2 = _groups(p1, p2.onto), _groups(p2, p1.onto)
    if set(g1) != set(g2):
        raise IncompatibleError("projections disagree on the shared items")
    rows = []
    for x in sorted(g1, key=key):
        a, b = sorted(g1[x], key=key), sorted(g2[x], key=key)
        if len(a) != len(b):
            raise IncompatibleError(f"projections disagree on how often {x} occurs")
        rows.extend(union(y, z) for y, z in zip(a, b))
    return TransactionDatabase(rows, n_items=_universe(union(p1.onto, p2.onto)))


def count_compatible_two(p1: Projection, p2: Projection) -> int:
    """Number of tid-labeled databases whose projections match both inputs."""
    if not projections_compatible([p1, p2]) or len(p1) != len(p2):
        raise IncompatibleError("projections are not compatible")
    common = intersection(p1.onto, p2.onto)
    cnt = p1.restrict(common)
    s1 = Counter(p1.rows)
    s2 = Counter(p2.rows)
    total = factorial(len(p1)) // prod(factorial(c) for c in cnt.values())
    for x, c in cnt.items():
        a = factorial(c) // prod(factorial(v) for y, v in s1.items() if intersection(y, common) == x)
        b = factorial(c) // prod(factorial(v) for y, v in s2.items() if intersection(y, common) == x)
        total *= a * b
    return total


def count_compatible_bruteforce(p1: Projection, p2: Projection) -> int:
    """Count tid-labeled databases by assigning rows tid by tid."""
    items = union(p1.onto, p2.onto)
    if len(p1) != len(p2):
        return 0
    choices = [
        x for r in range(len(items) + 1) for x in combinations(items, r)
    ]
    left1, left2 = Counter(p1.rows), Counter(p2.rows)

    def go(t):
        if t == len(p1):
            return 1
        total = 0
        for x in choices:
            a, b = intersection(x, p1.onto), intersection(x, p2.onto)
            if left1[a] and left2[b]:
                left1[a] -= 1
                left2[b] -= 1
                total += go(t + 1)
                left1[a] += 1
                left2[b] += 1
        return total

    return go(0)


def reconstruct_from_projections(projections):
    """Backtracking search for a database matching every projection, or None.

    Projections are placed one at a time; each row of the next projection
    must agree with what earlier projections put on the shared items.
    """
    ps = sorted(projections, key=lambda p: key(p.onto))
    if not ps:
        return TransactionDatabase([])
    n = len(ps[0])
    if any(len(p) != n for p in ps):
        return None
    rows = [EMPTY] * n

    def place(k, covered):
        if k == len(ps):
            return True
        p = ps[k]
        remaining = Counter(p.rows)

        def assign(t):
            if t == n:
                return place(k + 1, union(covered, p.onto))
            for y in sorted(remaining, key=key):
                if not remaining[y]:
                    continue
                if intersection(rows[t], p.onto) != intersection(y, covered):
                    continue
                remaining[y] -= 1
                old = rows[t]
                rows[t] = union(old, y)
                if assign(t + 1):
                    return True
                rows[t] = old
                remaining[y] += 1
            return False

        return assign(0)

    items = EMPTY
    for p in ps:
        items = union(items, p.onto)
    if place(0, EMPTY):
        return TransactionDatabase(rows, n_items=_universe(items))
    return None


def coloring_gadget(vertices, edges):
    """Projections that are jointly reconstructable iff the graph is 3-colorable.

    Item ids: vertex v with colour c maps to 3 * index(v) + index(c).
    """
    vidx = {v: i for i, v in enumerate(vertices)}

    def item(v, c):
        return 3 * vidx[v] + c

    out = []
    for u, v in edges:
        onto = [item(u, c) for c in range(3)] + [item(v, c) for c in range(3)]
        rows = [
            (item(u, a), item(v, b)) for a in range(3) for b in range(3) if a != b
        ]
        out.append(Projection(onto, rows))
    return out


MAX_BRUTE_ITEMS = 6
MAX_BRUTE_ROWS = 8


def claim_items(claim):
    vals = claim.entries if isinstance(claim, RatedCollection) else dict(claim)
    items = EMPTY
    for x in vals:
        items = union(items, x)
    return items


def brute_force_reconstruct(claim, items=None, max_items=MAX_BRUTE_ITEMS, max_rows=MAX_BRUTE_ROWS):
    """Smallest (lex) multiset of rows whose supports match every claimed itemset.

    Itemsets outside the claim are unconstrained. Returns None when no
    database with supp(empty set) rows exists.
    """
    vals = claim.entries if isinstance(claim, RatedCollection) else dict(claim)
    if EMPTY not in vals:
        raise PreconditionError("claim must rate the empty itemset")
    n = vals[EMPTY]
    items = claim_items(vals) if items is None else tuple(sorted(items))
    if len(items) > max_items:
        raise PreconditionError(f"brute force limited to {max_items} items")
    if n > max_rows:
        raise PreconditionError(f"brute force limited to {max_rows} rows")
    if any(v > n or v < 0 for v in vals.values()):
        return None
    targets = sorted((x for x in vals if x), key=key)
    types = [x for r in range(len(items) + 1) for x in combinations(items, r)]
    hits = [[i for i, x in enumerate(targets) if is_subset(x, t)] for t in types]
    need = [vals[x] for x in targets]
    have = [0] * len(targets)
    chosen = []

    def go(start, left):
        if left == 0:
            return have == need
        for i, x in enumerate(need):
            if x - have[i] > left:
                return False
        for ti in range(start, len(types)):
            if any(have[i] + 1 > need[i] for i in hits[ti]):
                continue
            for i in hits[ti]:
                have[i] += 1
            chosen.append(types[ti])
            if go(ti, left - 1):
                return True
            chosen.pop()
            for i in hits[ti]:
                have[i] -= 1
        return False

    if go(0, n):
        return TransactionDatabase(chosen, n_items=_universe(items))
    return None


def reconstruct_exhaustive(claim, items=None):
    """Enumeration oracle: first row multiset satisfying the claim, or None."""
    vals = claim.entries if isinstance(claim, RatedCollection) else dict(claim)
    n = vals[EMPTY]
    items = claim_items(vals) if items is None else tuple(sorted(items))
    types = [x for r in range(len(items) + 1) for x in combinations(items, r)]
    for rows in combinations_with_replacement(types, n):
        if all(sum(1 for t in rows if set(x) <= set(t)) == v for x, v in vals.items()):
            return rows
    return None


# text format --------------------------------------------------------------

def format_projection(p: Projection):
    head = "# onto: " + " ".join(map(str, p.onto)) + "\n"
    return head + "".join(" ".join(map(str, r)) + "\n" for r in p.rows)


def parse_projection(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("# onto:"):
        raise ParseError("missing '# onto:' header", 1)
    try:
        onto = parse_itemset(lines[0][len("# onto:"):])
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    rows = []
    for lineno, line in enumerate(lines[1:], 2):
        try:
            r = parse_itemset(line)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if not is_subset(r, onto):
            raise ParseError(f"row {r} is not inside the projected items", lineno)
        rows.append(r)
    return Projection(onto, rows)


def claim_from_supports(entries):
    return RatedCollection(entries, n=dict(entries).get(EMPTY), downward_closed=False)


def mined_supports(p: Projection, itemsets):
    return {x: p.support(x) for x in itemsets if is_subset(x, p.onto)}
