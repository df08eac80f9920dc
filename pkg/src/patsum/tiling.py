"""Tiles of a transaction database and greedy k-tiling by covered area."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .database import TransactionDatabase
from .errors import PreconditionError
from .itemsets import key
from .mining import mine_closed


@dataclass(frozen=True)
class Tile:
    tids: tuple
    items: tuple

    @property
    def area(self):
        return len(self.tids) * len(self.items)

    def cells(self):
        return {(t, i) for t in self.tids for i in self.items}


def tile_area(tile):
    return tile.area


def tiling_area(tiles):
    cells = set()
    for t in tiles:
        cells |= t.cells()
    return len(cells)


def maximal_tile_of(x, db: TransactionDatabase) -> Tile:
    """The tile (cover(x), cl(x)): no tile on x's rows or columns is larger."""
    if db.support(x) == 0:
        raise PreconditionError(f"itemset {x} has zero support")
    return Tile(db.cover(x), db.closure(x))


def candidate_tiles(db: TransactionDatabase):
    """Maximal tiles of every non-empty closed itemset with support >= 1."""
    if len(db) == 0:
        return []
    closed = mine_closed(db, Fraction(1, len(db)))
    tiles = [Tile(db.cover(x), x) for x in closed.itemsets() if x]
    return tiles


@dataclass
class TilingResult:
    tiles: list
    cumulative_area: list
    exhausted: bool


def greedy_tiling(db: TransactionDatabase, k, candidates=None) -> TilingResult:
    """Add the candidate tile with the largest union area, k times.

    Ties prefer the smallest itemset by (cardinality, lex). Stops early
    with ``exhausted=True`` when the candidates run out.
    """
    pool = sorted(candidates if candidates is not None else candidate_tiles(db),
                  key=lambda t: key(t.items))
    covered = set()
    chosen, areas = [], []
    while len(chosen) < k and pool:
        best, gain = None, -1
        for t in pool:
            g = len(t.cells() - covered)
            if g > gain:
                best, gain = t, g
        pool.remove(best)
        covered |= best.cells()
        chosen.append(best)
        areas.append(len(covered))
    return TilingResult(chosen, areas, exhausted=len(chosen) < k)


def best_tiling_bruteforce(db: TransactionDatabase, k, candidates=None):
    """Exact best k-tiling over the candidate tiles, (tiles, area)."""
    pool = sorted(candidates if candidates is not None else candidate_tiles(db),
                  key=lambda t: key(t.items))
    k = min(k, len(pool))
    best = ([], 0)
    for combo in combinations(pool, k):
        a = tiling_area(combo)
        if a > best[1]:
            best = (list(combo), a)
    return best


def total_cells(db: TransactionDatabase):
    return sum(len(t) for t in db)
