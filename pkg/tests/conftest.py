import random

import pytest
from hypothesis import strategies as st

from clusterfan.cluster import enumerate_seeds
from clusterfan.ssyt import Tableau, tableau_to_array


def random_tableau(rng: random.Random, n: int, max_width: int = 10) -> Tableau:
    """Row by row: each box is at least its left neighbour and above the box below it."""
    rows: list[tuple[int, ...]] = []
    width = rng.randint(0, max_width)
    for j in range(1, n + 1):
        row = []
        below = rows[-1] if rows else None
        for c in range(width):
            low = max(row[-1] if row else 1, below[c] + 1 if below else j)
            if low > n:
                break
            row.append(rng.randint(low, min(n, low + rng.randint(0, 2))))
        if not row:
            break
        rows.append(tuple(row))
        width = rng.randint(0, len(row))
    return Tableau(n, tuple(rows))


@st.composite
def tableaux(draw, min_n: int = 1, max_n: int = 7, max_width: int = 10):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_tableau(random.Random(seed), n, max_width)


@st.composite
def d_tight_arrays(draw, min_n: int = 1, max_n: int = 7):
    return tableau_to_array(draw(tableaux(min_n, max_n)))


_GRAPHS: dict = {}


def graph(n: int):
    if n not in _GRAPHS:
        _GRAPHS[n] = enumerate_seeds(n)
    return _GRAPHS[n]


@pytest.fixture(scope="session")
def g3():
    return graph(3)


@pytest.fixture(scope="session")
def g4():
    return graph(4)


@pytest.fixture(scope="session")
def g5():
    return graph(5)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
