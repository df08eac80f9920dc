"""Transaction databases and the FIMI text format."""
from fractions import Fraction

from .errors import ParseError, PreconditionError
from .itemsets import EMPTY, itemset


class TransactionDatabase:
    """Transactions with tids 1..n over the items ``0..n_items-1``.

    Support counting goes through per-item tid bitmasks, so a query costs
    one big-int AND per item of the itemset.
    """

    def __init__(self, transactions, n_items=None):
        rows = tuple(itemset(t) for t in transactions)
        top = max((t[-1] for t in rows if t), default=-1)
        if n_items is None:
            n_items = top + 1
        elif top >= n_items:
            raise PreconditionError(f"item {top} outside universe of {n_items} items")
        self.transactions = rows
        self.n_items = n_items
        self._all = (1 << len(rows)) - 1
        self._tidmask = [0] * n_items
        for pos, t in enumerate(rows):
            for i in t:
                self._tidmask[i] |= 1 << pos

    def __len__(self):
        return len(self.transactions)

    def __getitem__(self, tid):
        return self.transactions[tid - 1]

    def __iter__(self):
        return iter(self.transactions)

    def __eq__(self, other):
        return (
            isinstance(other, TransactionDatabase)
            and self.transactions == other.transactions
            and self.n_items == other.n_items
        )

    def __repr__(self):
        return f"TransactionDatabase({list(self.transactions)!r}, n_items={self.n_items})"

    @property
    def items(self):
        return tuple(range(self.n_items))

    def tids(self):
        return range(1, len(self) + 1)

    def cover_mask(self, x):
        m = self._all
        for i in x:
            if i >= self.n_items:
                return 0
            m &= self._tidmask[i]
            if not m:
                break
        return m

    def cover(self, x):
        """Tids (1-based) of the transactions containing ``x``."""
        m = self.cover_mask(x)
        return tuple(pos + 1 for pos in range(len(self)) if m >> pos & 1)

    def support(self, x):
        return self.cover_mask(x).bit_count()

    def frequency(self, x):
        if not self.transactions:
            raise PreconditionError("frequency is undefined on an empty database")
        return Fraction(self.support(x), len(self))

    def closure(self, x):
        """Intersection of the transactions that contain ``x``."""
        m = self.cover_mask(x)
        if not m:
            raise PreconditionError(f"itemset {x} has no closure: support is zero")
        return tuple(i for i in range(self.n_items) if m & self._tidmask[i] == m)

    def multiset(self):
        """Rows as a sorted tuple, i.e. the database up to tid permutation."""
        return tuple(sorted(self.transactions))


def parse_database(text, n_items=None):
    """Parse FIMI text: one transaction per line, blank lines are empty."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows = []
    for lineno, line in enumerate(lines, 1):
        rows.append(_parse_row(line, lineno))
    return TransactionDatabase(rows, n_items=n_items)


def _parse_row(line, lineno):
    items = []
    for tok in line.split():
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"non-integer token {tok!r}", lineno) from None
        if v < 0:
            raise ParseError(f"negative item id {v}", lineno)
        items.append(v)
    if len(set(items)) != len(items):
        raise ParseError("duplicate item in transaction", lineno)
    return tuple(sorted(items)) if items else EMPTY


def format_database(db):
    return "".join(" ".join(map(str, t)) + "\n" for t in db)
