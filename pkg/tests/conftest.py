from fractions import Fraction

import pytest
from hypothesis import strategies as st

from patsum.database import TransactionDatabase, parse_database

A, B, C, D = 1, 2, 3, 4

# acceptance result lines, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def d1():
    # items A..D are 1..4
    return parse_database("1 2 3\n1 2\n1 2 3 4\n2 3\n")


@pytest.fixture
def d2():
    # items A, B, C are 0, 1, 2
    return TransactionDatabase([(0,), (0, 2), (0, 1, 2), (1, 2)])


@pytest.fixture
def suboptimal():
    """Non-empty subsets of {0,1,2}: the triple has support 1, the rest 3."""
    vals = {x: 3 for x in [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]}
    vals[(0, 1, 2)] = 1
    return vals


def databases(max_items=6, max_rows=10, min_rows=0):
    row = st.sets(st.integers(0, max_items - 1)).map(lambda s: tuple(sorted(s)))
    return st.lists(row, min_size=min_rows, max_size=max_rows).map(
        lambda rows: TransactionDatabase(rows, n_items=max_items)
    )


def fr(p, q=1):
    return Fraction(p, q)
