"""Semistandard tableaux, D-tight arrays and Gelfand-Tsetlin patterns.

Conventions:

* Tableaux are French: ``rows[0]`` is the bottom (longest) row.
* An ``Array`` holds the integers ``a[i, j]`` for ``1 <= j <= i <= n``;
  ``a[i, j]`` counts the boxes of row ``j`` filled with ``i``.  Entries
  outside that triangle read as zero.
* Arrays are compared through the exponent vectors of ``X^A``: pure lex with
  the variables ranked ``x11 > x12 > ... > x1n > x21 > ...``.  Flattening the
  triangle row-major in ``i`` (``(1,1), (2,1), (2,2), (3,1), ...``) lists the
  support in exactly that rank order, so lex order on arrays is tuple order
  on ``entries``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidTableau, NotDTight, NotGT, OutOfRange, SizeMismatch


@lru_cache(maxsize=None)
def triangle_index(n: int) -> tuple[tuple[int, int], ...]:
    """Positions ``(i, j)`` with ``1 <= j <= i <= n`` in lex-rank order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(1, i + 1))


@lru_cache(maxsize=None)
def _position(n: int) -> dict[tuple[int, int], int]:
    return {ij: k for k, ij in enumerate(triangle_index(n))}


def dimension(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True, order=True)
class Array:
    """Lower-triangular nonnegative integer array (the coordinates of a tableau)."""

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != dimension(self.n):
            raise SizeMismatch(f"expected {dimension(self.n)} entries for n={self.n}, got {len(self.entries)}")
        if any(e < 0 for e in self.entries):
            raise ValueError(f"array entries must be nonnegative: {self.entries}")

    @classmethod
    def zero(cls, n: int) -> Array:
        return cls(n, (0,) * dimension(n))

    @classmethod
    def from_dict(cls, n: int, values: Mapping[tuple[int, int], int]) -> Array:
        pos = _position(n)
        entries = [0] * dimension(n)
        for (i, j), v in values.items():
            if (i, j) not in pos:
                if v:
                    raise OutOfRange(f"index ({i}, {j}) outside the triangle 1 <= j <= i <= {n}")
                continue
            entries[pos[i, j]] = v
        return cls(n, tuple(entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> Array:
        """Inverse of :meth:`rows`: ``rows[j-1] == [a[j,j], ..., a[n,j]]``."""
        n = len(rows)
        values = {}
        for j, row in enumerate(rows, start=1):
            if len(row) != n - j + 1:
                raise SizeMismatch(f"row {j} must have {n - j + 1} entries")
            for i, v in enumerate(row, start=j):
                values[i, j] = v
        return cls.from_dict(n, values)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        k = _position(self.n).get(ij)
        return 0 if k is None else self.entries[k]

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return zip(triangle_index(self.n), self.entries)

    def rows(self) -> list[list[int]]:
        """Bottom-up display rows: row ``j`` is ``[a[j,j], ..., a[n,j]]``."""
        return [[self[i, j] for i in range(j, self.n + 1)] for j in range(1, self.n + 1)]

    def total(self) -> int:
        return sum(self.entries)

    def __add__(self, other: Array) -> Array:
        _check_same(self, other)
        return Array(self.n, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: Array) -> Array:
        _check_same(self, other)
        return Array(self.n, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, t: int) -> Array:
        return Array(self.n, tuple(t * a for a in self.entries))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": self.rows()}

    @classmethod
    def from_json(cls, data: Mapping) -> Array:
        arr = cls.from_rows(data["rows"])
        if arr.n != data["n"]:
            raise SizeMismatch("row count does not match n")
        return arr


def _check_same(a: Array, b: Array) -> None:
    if a.n != b.n:
        raise SizeMismatch(f"arrays of different sizes {a.n} and {b.n}")


@dataclass(frozen=True)
class Tableau:
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        for j, row in enumerate(rows):
            if not row:
                raise InvalidTableau("rows must be nonempty")
            if j and len(row) > len(rows[j - 1]):
                raise InvalidTableau(f"shape is not a partition: {[len(r) for r in rows]}")
            if any(e < 1 or e > self.n for e in row):
                raise InvalidTableau(f"entries must lie in 1..{self.n}: {row}")
            if any(a > b for a, b in zip(row, row[1:])):
                raise InvalidTableau(f"row {j + 1} is not weakly increasing: {row}")
            if j and any(row[c] <= rows[j - 1][c] for c in range(len(row))):
                raise InvalidTableau(f"columns must strictly increase upward (row {j + 1})")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        """Column fillings read bottom to top, i.e. as increasing sets."""
        if not self.rows:
            return []
        return [tuple(r[c] for r in self.rows if c < len(r)) for c in range(len(self.rows[0]))]

    @classmethod
    def from_columns(cls, n: int, columns: Iterable[Iterable[int]]) -> Tableau:
        cols = [sorted(c) for c in columns]
        height = max((len(c) for c in cols), default=0)
        rows = [[c[j] for c in cols if j < len(c)] for j in range(height)]
        return cls(n, tuple(tuple(r) for r in rows))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: Mapping) -> Tableau:
        return cls(data["n"], tuple(tuple(r) for r in data["rows"]))

    def render(self) -> str:
        """Rows top to bottom, the way the tableau is drawn."""
        return "/".join(" ".join(map(str, r)) for r in reversed(self.rows))


@dataclass(frozen=True)
class GTPattern:
    """Gelfand-Tsetlin pattern ``x[i, j]`` for ``1 <= i <= j <= n``."""

    n: int
    x: tuple[tuple[int, ...], ...]  # x[j-1] == (x[1,j], ..., x[j,j])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 1 <= i <= j <= self.n:
            return 0
        return self.x[j - 1][i - 1]

    def violation(self) -> tuple[int, int] | None:
        for j in range(1, self.n + 1):
            for i in range(1, j + 1):
                if self[i, j] < 0:
                    return (i, j)
                if i >= 2 and not self[i, j] <= self[i - 1, j - 1] <= self[i - 1, j]:
                    return (i, j)
        return None

    def to_json(self) -> dict:
        """Rows top row first: ``[x[n,n], ..., x[1,n]]``, then row ``n-1`` ..."""
        return {"n": self.n, "rows": [[self[i, j] for i in range(j, 0, -1)] for j in range(self.n, 0, -1)]}

    @classmethod
    def from_json(cls, data: Mapping) -> GTPattern:
        n = data["n"]
        rows = data["rows"]
        x = [None] * n
        for r, row in enumerate(rows):
            j = n - r
            x[j - 1] = tuple(reversed(row))
        return cls(n, tuple(x))


def tableau_to_array(t: Tableau) -> Array:
    counts: dict[tuple[int, int], int] = {}
    for j, row in enumerate(t.rows, start=1):
        for i in row:
            counts[i, j] = counts.get((i, j), 0) + 1
    return Array.from_dict(t.n, counts)


def d_tight_violation(a: Array) -> tuple[int, int] | None:
    """First ``(i, j)`` (scanning ``j`` then ``i``) whose D-tight inequality fails.

    The inequality for ``(i, j)`` reads
    ``a[1,j+1] + ... + a[i,j+1] <= a[1,j] + ... + a[i-1,j]``.
    """
    n = a.n
    for j in range(1, n):
        upper = lower = 0
        for i in range(1, n + 1):
            upper += a[i, j + 1]
            if upper > lower:
                return (i, j)
            lower += a[i, j]
    return None


def is_d_tight(a: Array) -> bool:
    return d_tight_violation(a) is None


def array_to_tableau(a: Array) -> Tableau:
    bad = d_tight_violation(a)
    if bad is not None:
        raise NotDTight(*bad)
    rows = []
    for j in range(1, a.n + 1):
        row = [i for i in range(j, a.n + 1) for _ in range(a[i, j])]
        if not row:
            break
        rows.append(tuple(row))
    return Tableau(a.n, tuple(rows))


def array_to_gt(a: Array) -> GTPattern:
    bad = d_tight_violation(a)
    if bad is not None:
        raise NotDTight(*bad)
    n = a.n
    x = []
    for j in range(1, n + 1):
        x.append(tuple(sum(a[k, i] for k in range(i, j + 1)) for i in range(1, j + 1)))
    return GTPattern(n, tuple(x))


def gt_to_array(p: GTPattern) -> Array:
    bad = p.violation()
    if bad is not None:
        raise NotGT(f"Gelfand-Tsetlin inequality violated at {bad}")
    values = {}
    for i in range(1, p.n + 1):
        for k in range(i, p.n + 1):
            values[k, i] = p[i, k] - p[i, k - 1]
    return Array.from_dict(p.n, values)


def lex_compare(a: Array, b: Array) -> int:
    """-1, 0 or 1 as ``X^a`` is smaller than, equal to or bigger than ``X^b``."""
    _check_same(a, b)
    return (a.entries > b.entries) - (a.entries < b.entries)


def tropical_product(a: Array, b: Array) -> Array:
    return a + b


def tropical_sum(a: Array, b: Array) -> Array:
    return b if lex_compare(a, b) < 0 else a


def l_statistic(a: Array) -> int:
    n = a.n
    total = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, j):
                total += a[i, j] * a[i, k] + a[j, i] * a[k, i]
    return total


def column_array(column: Iterable[int], n: int) -> Array:
    """Array of the one-column tableau with the given set of entries."""
    col = sorted(set(column))
    if col and (col[0] < 1 or col[-1] > n):
        raise OutOfRange(f"column {col} not inside 1..{n}")
    return Array.from_dict(n, {(i, r): 1 for r, i in enumerate(col, start=1)})


def interval_column_array(i: int, j: int, n: int) -> Array:
    if i < 1 or j < 1 or i + j - 1 > n:
        raise OutOfRange(f"interval start={i} length={j} does not fit in 1..{n}")
    return column_array(range(i, i + j), n)


def frozen_columns(n: int) -> list[tuple[int, ...]]:
    """The initial intervals ``{1..i}`` followed by the final intervals ``{i..n}``, ``i >= 2``."""
    return [tuple(range(1, i + 1)) for i in range(1, n + 1)] + [tuple(range(i, n + 1)) for i in range(2, n + 1)]


def frozen_arrays(n: int) -> list[Array]:
    return [column_array(c, n) for c in frozen_columns(n)]


def column_set_of(a: Array) -> tuple[int, ...] | None:
    """The column set when ``a`` is the array of a one-column tableau, else None."""
    try:
        t = array_to_tableau(a)
    except NotDTight:
        return None
    if t.shape and max(t.shape) == 1:
        return t.columns()[0]
    return None
