"""Itemsets as sorted, duplicate-free tuples of non-negative ints.

Tuples hash, compare lexicographically and are cheap, so the rest of the
package uses them directly instead of a wrapper class.
"""
from itertools import combinations

EMPTY = ()


def itemset(items):
    """Return the canonical itemset for ``items``."""
    return tuple(sorted(set(items)))


def key(x):
    """Sort key: cardinality first, then lexicographic."""
    return (len(x), x)


def is_subset(x, y):
    if len(x) > len(y):
        return False
    return set(x).issubset(y)


def is_proper_subset(x, y):
    return len(x) < len(y) and set(x).issubset(y)


def union(x, y):
    return tuple(sorted(set(x) | set(y)))


def intersection(x, y):
    ys = set(y)
    return tuple(i for i in x if i in ys)


def difference(x, y):
    ys = set(y)
    return tuple(i for i in x if i not in ys)


def subsets(x, proper=False):
    """All subsets of ``x`` in (cardinality, lex) order."""
    top = len(x) if not proper else len(x) - 1
    for r in range(top + 1):
        yield from combinations(x, r)


def immediate_subsets(x):
    return [x[:i] + x[i + 1:] for i in range(len(x))]


def to_mask(x):
    m = 0
    for i in x:
        m |= 1 << i
    return m


def from_mask(m):
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def format_itemset(x, sep=" "):
    return sep.join(str(i) for i in x)


def parse_itemset(text):
    """Parse whitespace separated item ids; raises ValueError on bad tokens."""
    items = [int(tok) for tok in text.split()]
    if any(i < 0 for i in items):
        raise ValueError("negative item id")
    if len(set(items)) != len(items):
        raise ValueError("duplicate item")
    return tuple(sorted(items))
