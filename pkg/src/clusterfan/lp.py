"""Exact rational LP feasibility via phase I of the simplex method.

Only feasibility is ever needed here, so the solver minimises the sum of
artificial variables and reports a feasible point or ``None``.  Bland's rule
(smallest entering index, smallest leaving basic index on ratio ties) makes
cycling impossible, so termination does not depend on degeneracy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int | Fraction]]


def find_feasible(a_eq: Matrix = (), b_eq: Sequence = (), a_ge: Matrix = (), b_ge: Sequence = (),
                  nvars: int | None = None) -> list[Fraction] | None:
    """A point ``x >= 0`` with ``a_eq x == b_eq`` and ``a_ge x >= b_ge``, or None."""
    if nvars is None:
        rows = list(a_eq) + list(a_ge)
        if not rows:
            raise ValueError("cannot infer the number of variables from an empty system")
        nvars = len(rows[0])
    n_ge = len(a_ge)
    ncols = nvars + n_ge
    tab: list[list[Fraction]] = []
    for row, b in zip(a_eq, b_eq):
        tab.append([Fraction(v) for v in row] + [Fraction(0)] * n_ge + [Fraction(b)])
    for k, (row, b) in enumerate(zip(a_ge, b_ge)):
        surplus = [Fraction(0)] * n_ge
        surplus[k] = Fraction(-1)
        tab.append([Fraction(v) for v in row] + surplus + [Fraction(b)])
    for row in tab:
        if len(row) != ncols + 1:
            raise ValueError("constraint rows have inconsistent lengths")
        if row[-1] < 0:
            for c in range(len(row)):
                row[c] = -row[c]
    m = len(tab)
    if m == 0:
        return [Fraction(0)] * nvars
    # artificial variable of row i has column index ncols + i
    basis = [ncols + i for i in range(m)]
    for i, row in enumerate(tab):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        tab[i] = row[:-1] + art + [row[-1]]
    width = ncols + m
    cost = [Fraction(0)] * (width + 1)
    for row in tab:
        for c in range(ncols):
            cost[c] -= row[c]
        cost[width] -= row[width]

    while True:
        enter = next((c for c in range(width) if cost[c] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            piv = tab[i][enter]
            if piv > 0:
                ratio = tab[i][width] / piv
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # phase I objective is bounded below by 0; an unbounded ray cannot occur
            raise AssertionError("unbounded phase I ray")
        _pivot(tab, cost, leave, enter, width)
        basis[leave] = enter

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = tab[i][width]
    return x


def _pivot(tab: list[list[Fraction]], cost: list[Fraction], r: int, c: int, width: int) -> None:
    prow = tab[r]
    p = prow[c]
    if p != 1:
        prow[:] = [v / p for v in prow]
    nz = [k for k in range(width + 1) if prow[k]]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
    f = cost[c]
    if f:
        for k in nz:
            cost[k] -= f * prow[k]
