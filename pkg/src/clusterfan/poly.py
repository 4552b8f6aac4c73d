"""Sparse integer polynomials in the matrix entries ``x[i, j]``.

A monomial is packed into one Python integer: the exponent of the variable of
rank ``r`` (``x11`` has rank 0, ``x12`` rank 1, ... row-major) sits in a
``FIELD``-bit slot, with ``x11`` in the most significant slot.  Integer order
on packed monomials is then pure lex order, monomial multiplication is integer
addition, and divisibility is a guard-bit test.  The top bit of every slot is
kept clear so that exponents never carry into the neighbouring slot.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    LeadingNotDTight,
    NotDivisible,
    NotMonic,
    NotTriangular,
    SizeMismatch,
    ZeroPolynomial,
)
from .ssyt import Array, Tableau, d_tight_violation

FIELD = 16
_SLOT = (1 << FIELD) - 1
MAX_EXPONENT = (1 << (FIELD - 1)) - 1


@lru_cache(maxsize=None)
def _guard(n: int) -> int:
    g = 0
    for r in range(n * n):
        g |= 1 << (FIELD * r + FIELD - 1)
    return g


def _shift(n: int, i: int, j: int) -> int:
    return FIELD * (n * n - 1 - ((i - 1) * n + (j - 1)))


def pack(n: int, exponents: Mapping[tuple[int, int], int]) -> int:
    m = 0
    for (i, j), e in exponents.items():
        if not (1 <= i <= n and 1 <= j <= n):
            raise SizeMismatch(f"variable x[{i},{j}] outside an {n}x{n} matrix")
        if not 0 <= e <= MAX_EXPONENT:
            raise ValueError(f"exponent {e} out of range")
        m += e << _shift(n, i, j)
    return m


def unpack(n: int, m: int) -> dict[tuple[int, int], int]:
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = (m >> _shift(n, i, j)) & _SLOT
            if e:
                out[i, j] = e
    return out


def divides(n: int, d: int, m: int) -> bool:
    """Whether monomial ``d`` divides monomial ``m`` (both packed)."""
    g = _guard(n)
    return ((m | g) - d) & g == g


@dataclass(frozen=True, order=True)
class Monomial:
    n: int
    packed: int

    @classmethod
    def from_exponents(cls, n: int, exponents: Mapping[tuple[int, int], int]) -> Monomial:
        return cls(n, pack(n, exponents))

    @property
    def exponents(self) -> dict[tuple[int, int], int]:
        return unpack(self.n, self.packed)

    def degree(self) -> int:
        return sum(self.exponents.values())

    def __mul__(self, other: Monomial) -> Monomial:
        if self.n != other.n:
            raise SizeMismatch("monomials over different matrix sizes")
        return Monomial(self.n, self.packed + other.packed)

    def __str__(self) -> str:
        return _render_monomial(self.n, self.packed)


def _render_monomial(n: int, m: int) -> str:
    parts = []
    for (i, j), e in sorted(unpack(n, m).items()):
        parts.append(f"x[{i},{j}]" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


class Polynomial:
    """Immutable polynomial over the integers in the ``n*n`` variables ``x[i, j]``."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping[int, int] | None = None):
        self.n = n
        self.terms: dict[int, int] = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[int, int]) -> Polynomial:
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, n: int, c: int) -> Polynomial:
        return cls(n, {0: c})

    @classmethod
    def variable(cls, n: int, i: int, j: int) -> Polynomial:
        return cls._raw(n, {pack(n, {(i, j): 1}): 1})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Mapping[tuple[int, int], int], int]]) -> Polynomial:
        acc: dict[int, int] = {}
        for exps, c in terms:
            m = pack(n, exps)
            acc[m] = acc.get(m, 0) + c
        return cls(n, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: Polynomial) -> None:
        if self.n != other.n:
            raise SizeMismatch(f"polynomials over {self.n}x{self.n} and {other.n}x{other.n} matrices")

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                del acc[m]
        return Polynomial._raw(self.n, acc)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc: dict[int, int] = {}
        get = acc.get
        b_items = list(b.items())
        for m1, c1 in a.items():
            for m2, c2 in b_items:
                m = m1 + m2
                acc[m] = get(m, 0) + c1 * c2
        return Polynomial._raw(self.n, {m: c for m, c in acc.items() if c})

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def leading(self) -> tuple[int, int]:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        m = max(self.terms)
        return m, self.terms[m]

    def sorted_terms(self) -> list[tuple[int, int]]:
        return sorted(self.terms.items(), reverse=True)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(unpack(self.n, m).values()) for m in self.terms)

    def exact_div(self, d: Polynomial) -> Polynomial:
        return poly_exact_div(self, d)

    def evaluate(self, matrix: Sequence[Sequence]) -> Fraction:
        return evaluate(self, matrix)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        text = render(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"Polynomial(n={self.n}, {text})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def product(polys: Iterable[Polynomial], n: int) -> Polynomial:
    """Product of the factors, smallest first to keep intermediates small."""
    factors = sorted(polys, key=len)
    result = Polynomial.constant(n, 1)
    for f in factors:
        result = result * f
    return result


def poly_exact_div(p: Polynomial, d: Polynomial) -> Polynomial:
    """Exact quotient ``p / d`` by leading-term elimination under lex.

    Quotient terms appear in decreasing order; the remainder's leading term is
    pulled from a max-heap of its monomials.  Raises ``NotDivisible`` as soon
    as the current leading term cannot be cancelled.
    """
    p._check(d)
    n = p.n
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    d_lead, d_coef = d.leading()
    d_rest = [(m - d_lead, c) for m, c in d.terms.items() if m != d_lead]
    rem = dict(p.terms)
    heap = [-m for m in rem]
    heapq.heapify(heap)
    quotient: dict[int, int] = {}
    g = _guard(n)
    while heap:
        m = -heapq.heappop(heap)
        c = rem.pop(m, 0)
        if not c:
            continue
        if ((m | g) - d_lead) & g != g:
            raise NotDivisible(f"leading monomial {_render_monomial(n, m)} is not divisible by "
                               f"{_render_monomial(n, d_lead)}")
        q, r = divmod(c, d_coef)
        if r:
            raise NotDivisible(f"coefficient {c} is not divisible by {d_coef}")
        qm = m - d_lead
        quotient[qm] = q
        for dm, dc in d_rest:
            # qm + d_lead + (dm - d_lead) without leaving the monomial lattice
            t = qm + d_lead + dm
            old = rem.get(t)
            if old is None:
                rem[t] = -q * dc
                heapq.heappush(heap, -t)
            else:
                new = old - q * dc
                if new:
                    rem[t] = new
                else:
                    del rem[t]
    return Polynomial._raw(n, quotient)


def _det_expand(n: int, rows: tuple[int, ...], lower: bool) -> dict[int, int]:
    """Minor on ``rows`` and columns ``1..len(rows)``, expanded along the last column.

    Sub-minors are memoised by row subset, so a size-k minor costs
    ``O(k 2^k)`` polynomial operations instead of ``k!`` permutations.
    """
    memo: dict[tuple[int, ...], dict[int, int]] = {(): {0: 1}}

    def minor(sub: tuple[int, ...]) -> dict[int, int]:
        got = memo.get(sub)
        if got is not None:
            return got
        col = len(sub)
        acc: dict[int, int] = {}
        for pos, r in enumerate(sub):
            if lower and col > r:
                continue
            sign = -1 if (col - 1 - pos) % 2 else 1
            var = 1 << _shift(n, r, col)
            for m, c in minor(sub[:pos] + sub[pos + 1:]).items():
                key = m + var
                acc[key] = acc.get(key, 0) + sign * c
        acc = {m: c for m, c in acc.items() if c}
        memo[sub] = acc
        return acc

    return minor(rows)


@lru_cache(maxsize=None)
def _flag_minor_cached(rows: tuple[int, ...], n: int, lower: bool) -> Polynomial:
    return Polynomial._raw(n, _det_expand(n, rows, lower))


def flag_minor(rows: Iterable[int], n: int, lower: bool = False) -> Polynomial:
    """Minor of the generic ``n x n`` matrix on ``rows`` and the first ``|rows|`` columns.

    With ``lower=True`` the entries above the diagonal are set to zero.
    """
    key = tuple(sorted(set(rows)))
    if not key:
        raise ValueError("flag minor needs a nonempty row set")
    if key[0] < 1 or key[-1] > n:
        raise SizeMismatch(f"row set {key} not inside 1..{n}")
    return _flag_minor_cached(key, n, lower)


def tableau_basis_element(t: Tableau, lower: bool = False) -> Polynomial:
    return product((flag_minor(c, t.n, lower) for c in t.columns()), t.n)


def leading_monomial(p: Polynomial) -> tuple[Monomial, int]:
    m, c = p.leading()
    return Monomial(p.n, m), c


def monomial_to_array(n: int, m: int) -> Array:
    exps = unpack(n, m)
    bad = [(i, j) for (i, j) in exps if j > i]
    if bad:
        raise NotTriangular(f"leading monomial {_render_monomial(n, m)} uses x{bad} above the diagonal")
    return Array.from_dict(n, exps)


def array_to_monomial(a: Array) -> int:
    return pack(a.n, {ij: e for ij, e in a.items() if e})


def leading_array(p: Polynomial) -> Array:
    """Exponent array of the lex-leading monomial of a monic polynomial.

    Raises ``NotMonic``, ``NotTriangular`` or ``LeadingNotDTight`` when the
    leading term is not of the form ``X^A`` with ``A`` a D-tight array.
    """
    m, c = p.leading()
    if c != 1:
        raise NotMonic(f"leading coefficient {c} != 1 for {p!r}")
    a = monomial_to_array(p.n, m)
    bad = d_tight_violation(a)
    if bad is not None:
        raise LeadingNotDTight(f"leading exponent {a.rows()} violates D-tightness at {bad}")
    return a


def evaluate(p: Polynomial, matrix: Sequence[Sequence]) -> Fraction:
    """Exact value at a rational matrix (entries int, Fraction or str)."""
    n = p.n
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SizeMismatch(f"expected an {n}x{n} matrix")
    vals = [Fraction(matrix[i - 1][j - 1]) for i in range(1, n + 1) for j in range(1, n + 1)]
    powers: list[dict[int, Fraction]] = [{} for _ in vals]
    total = Fraction(0)
    for m, c in p.terms.items():
        term = Fraction(c)
        r = n * n - 1
        while m:
            e = m & _SLOT
            if e:
                cache = powers[r]
                v = cache.get(e)
                if v is None:
                    v = cache[e] = vals[r] ** e
                term *= v
            m >>= FIELD
            r -= 1
        total += term
    return total


def render(p: Polynomial) -> str:
    """Terms in decreasing lex order; variables written ``x[i,j]``."""
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = _render_monomial(p.n, m)
        mag = abs(c)
        body = mono if (mag == 1 and m) else (f"{mag}" if not m else f"{mag}*{mono}")
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def pascal_matrix(n: int) -> list[list[int]]:
    """Symmetric Pascal matrix ``P[i][j] = C(i+j-2, i-1)``; totally positive."""
    from math import comb

    return [[comb(i + j, i) for j in range(n)] for i in range(n)]
