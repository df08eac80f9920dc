"""Chain and antichain partitions of partially ordered patterns.

The order is any strict ``less(a, b)`` relation; itemsets default to
proper inclusion.
"""
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError
from .itemsets import is_proper_subset, key
from .mining import RatedCollection


def subset_order(a, b):
    return is_proper_subset(a, b)


def _elements(c):
    if isinstance(c, RatedCollection):
        return c.itemsets()
    return list(c)


def _memo(less):
    @lru_cache(maxsize=None)
    def cached(a, b):
        return less(a, b)
    return cached


def order_edges(elements, less=subset_order):
    """All pairs (i, j) of element indices with elements[i] < elements[j]."""
    return [
        (i, j)
        for i, a in enumerate(elements)
        for j, b in enumerate(elements)
        if i != j and less(a, b)
    ]


# matchings ----------------------------------------------------------------

def max_bipartite_matching(left, right, edges):
    """Hopcroft-Karp. Returns a dict left vertex -> right vertex."""
    adj = {u: [] for u in left}
    for u, v in edges:
        adj[u].append(v)
    match_l = {u: None for u in left}
    match_r = {v: None for v in right}
    inf = float("inf")

    def bfs():
        dist = {}
        q = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = inf
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w is None:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found, dist

    def dfs(u, dist):
        for v in adj[u]:
            w = match_r[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w, dist)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = inf
        return False

    while True:
        found, dist = bfs()
        if not found:
            break
        for u in left:
            if match_l[u] is None:
                dfs(u, dist)
    return {u: v for u, v in match_l.items() if v is not None}


def greedy_maximal_matching(edges):
    """Take each edge in the given order if both endpoints are still free."""
    nxt, taken = {}, set()
    for u, v in edges:
        if u not in nxt and v not in taken:
            nxt[u] = v
            taken.add(v)
    return nxt


# chain partitions ---------------------------------------------------------

@dataclass
class ChainPartition:
    chains: list

    def __len__(self):
        return len(self.chains)


@dataclass
class AntichainPartition:
    antichains: list

    def __len__(self):
        return len(self.antichains)


def chains_from_matching(elements, matching):
    """Follow successor links; chain heads are the unmatched right vertices."""
    heads = [i for i in range(len(elements)) if i not in set(matching.values())]
    chains = []
    for h in heads:
        chain = [elements[h]]
        i = h
        while i in matching:
            i = matching[i]
            chain.append(elements[i])
        chains.append(chain)
    return ChainPartition(chains)


def partition_into_chains(c, less=subset_order):
    """Minimum chain partition from a maximum matching of the comparability graph."""
    elements = _elements(c)
    idx = range(len(elements))
    m = max_bipartite_matching(idx, idx, order_edges(elements, less))
    return chains_from_matching(elements, m)


def greedy_chains(c, less=subset_order, edge_order=None):
    """Chain partition from a greedy maximal matching; edges in ``edge_order``."""
    elements = _elements(c)
    edges = order_edges(elements, less) if edge_order is None else edge_order
    return chains_from_matching(elements, greedy_maximal_matching(edges))


def minimal_partition_into_chains(c, less=subset_order):
    """Insert each pattern into the first chain that stays a chain, else open one.

    Chains only grow, so no two final chains can be merged: the pattern
    that opened the later one would have fit into the earlier one.
    """
    elements = _elements(c)
    less = _memo(less)
    chains = []
    for p in elements:
        for chain in chains:
            pos = _insert_position(chain, p, less)
            if pos is not None:
                chain.insert(pos, p)
                break
        else:
            chains.append([p])
    return ChainPartition(chains)


def _insert_position(chain, p, less):
    if less(p, chain[0]):
        return 0
    if less(chain[-1], p):
        return len(chain)
    for j in range(1, len(chain)):
        if less(chain[j - 1], p) and less(p, chain[j]):
            return j
    return None


def partition_into_antichains(c, less=subset_order):
    """Peel off the maximal elements until nothing is left.

    Downward-closed itemset collections are split by cardinality directly.
    """
    if isinstance(c, RatedCollection) and c.downward_closed and less is subset_order:
        layers = {}
        for x in c.itemsets():
            layers.setdefault(len(x), []).append(x)
        return AntichainPartition([layers[k] for k in sorted(layers, reverse=True)])
    rest = _elements(c)
    out = []
    while rest:
        top = [p for p in rest if not any(less(p, q) for q in rest)]
        out.append(top)
        rest = [p for p in rest if p not in top]
    return AntichainPartition(out)


def is_chain(seq, less=subset_order):
    return all(less(a, b) for a, b in zip(seq, seq[1:]))


def is_antichain(seq, less=subset_order):
    return not any(less(a, b) for a in seq for b in seq if a is not b and a != b)


def longest_chain_length(c, less=subset_order):
    elements = sorted(_elements(c), key=key) if less is subset_order else _elements(c)
    height = {}

    def h(i):
        if i not in height:
            height[i] = 1 + max(
                (h(j) for j in range(len(elements)) if less(elements[j], elements[i])),
                default=0,
            )
        return height[i]

    return max((h(i) for i in range(len(elements))), default=0)


# encoding -----------------------------------------------------------------

@dataclass
class EncodedChain:
    ranks: dict
    values: list

    def render(self):
        return " ".join(f"{i}^{r}" for i, r in sorted(self.ranks.items()))


def encode_chain(chain, values=None):
    """Each item gets the rank of the first chain member that contains it."""
    chain = list(chain)
    if not chain:
        raise PreconditionError("empty chain")
    if not is_chain(chain):
        raise PreconditionError("input is not a strictly ascending chain")
    ranks = {}
    for r, x in enumerate(chain):
        for i in x:
            ranks.setdefault(i, r)
    if values is None:
        values = [None] * len(chain)
    if len(values) != len(chain):
        raise PreconditionError("values must parallel the chain")
    return EncodedChain(ranks, list(values))


def decode_chain(e: EncodedChain):
    """Member k is the set of items with rank at most k."""
    return [
        tuple(sorted(i for i, r in e.ranks.items() if r <= k))
        for k in range(len(e.values))
    ]


# Dilworth -----------------------------------------------------------------

@dataclass
class DilworthReport:
    chain_count: int
    antichain_size: int
    exact: bool

    @property
    def holds(self):
        return self.chain_count == self.antichain_size if self.exact else (
            self.chain_count >= self.antichain_size
        )


def max_antichain_bruteforce(c, less=subset_order):
    """Largest antichain by branch and bound over the elements."""
    elements = _elements(c)
    n = len(elements)
    comparable = [
        [i != j and (less(elements[i], elements[j]) or less(elements[j], elements[i]))
         for j in range(n)]
        for i in range(n)
    ]
    best = []

    def grow(i, current):
        nonlocal best
        if len(current) + (n - i) <= len(best):
            return
        if i == n:
            best = list(current)
            return
        if not any(comparable[i][j] for j in current):
            current.append(i)
            grow(i + 1, current)
            current.pop()
        grow(i + 1, current)

    grow(0, [])
    return [elements[i] for i in best]


def dilworth_check(c, less=subset_order, exhaustive_limit=15):
    """Minimum chain count against the largest antichain found."""
    elements = _elements(c)
    chains = len(partition_into_chains(elements, less))
    if len(elements) <= exhaustive_limit:
        return DilworthReport(chains, len(max_antichain_bruteforce(elements, less)), True)
    if less is subset_order:
        layers = {}
        for x in elements:
            layers[len(x)] = layers.get(len(x), 0) + 1
        return DilworthReport(chains, max(layers.values(), default=0), False)
    return DilworthReport(chains, 0, False)
