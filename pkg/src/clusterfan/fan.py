"""Seed cones in the cone of D-tight arrays and exact checks that they form a fan.

Every cone is simplicial and unimodular, so all point-location and
intersection questions reduce to exact integer linear algebra plus small
rational LPs.  The batched sweeps use numpy ``int64`` arithmetic; entries are
small integers and :func:`_int64_safe` refuses inputs whose products could
overflow, so the results are exact, not approximate.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .cluster import ExchangeGraph, Seed, SeedKey, key_to_str
from .errors import DegenerateFrozenSpan, NotUnimodular, SizeMismatch
from .lp import find_feasible
from .ssyt import Array, dimension, frozen_arrays, triangle_index

log = logging.getLogger(__name__)


class Location(str, enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


@dataclass(frozen=True)
class Cone:
    """Simplicial cone spanned by a seed's mutable labels followed by the frozen arrays."""

    n: int
    generators: tuple[Array, ...]
    seed_key: SeedKey = ()

    def __post_init__(self):
        if len(self.generators) != dimension(self.n):
            raise SizeMismatch(f"a cone for n={self.n} needs {dimension(self.n)} generators")

    @property
    def dim(self) -> int:
        return dimension(self.n)

    @cached_property
    def matrix(self) -> list[list[int]]:
        """Generators as columns."""
        return linalg.transpose([g.entries for g in self.generators])

    @cached_property
    def det(self) -> int:
        return linalg.det(self.matrix)

    @cached_property
    def inverse(self) -> list[list[int]]:
        if abs(self.det) != 1:
            raise NotUnimodular(f"cone {key_to_str(self.seed_key)} has determinant {self.det}")
        return linalg.integer_inverse(self.matrix)

    def coefficients(self, point: Sequence) -> list[Fraction]:
        """Coordinates of ``point`` in the generator basis."""
        return [Fraction(v) for v in linalg.mat_vec(self.inverse, point)]

    @property
    def generator_set(self) -> frozenset[Array]:
        return frozenset(self.generators)

    def sum_of_generators(self) -> list[int]:
        return [sum(col) for col in self.matrix]


def cone_of_seed(seed: Seed) -> Cone:
    frozen = frozen_arrays(seed.n)
    if set(seed.frozen_labels()) != set(frozen):
        raise ValueError("seed does not carry the frozen interval minors")
    cone = Cone(seed.n, tuple(seed.mutable_labels()) + tuple(frozen), _seed_key(seed))
    if abs(cone.det) != 1:
        raise NotUnimodular(f"seed cone {key_to_str(cone.seed_key)} has determinant {cone.det}")
    return cone


def _inherit_inverse(cone: Cone, parent: Cone, pos: int) -> None:
    """Fill in ``cone``'s inverse and determinant from a cone differing only in generator ``pos``.

    With ``u = G^-1 g'`` the new matrix is ``G E`` where ``E`` is the identity
    with column ``pos`` replaced by ``u``; so ``det' = det * u[pos]`` and the
    inverse changes by one elementary row operation per row.
    """
    inv = parent.inverse
    new_gen = cone.generators[pos].entries
    u = [sum(a * b for a, b in zip(row, new_gen)) for row in inv]
    pivot = u[pos]
    if pivot not in (1, -1):
        raise NotUnimodular(f"cone {key_to_str(cone.seed_key)} has determinant {parent.det * pivot}")
    top = [v * pivot for v in inv[pos]]
    rows = []
    for i, row in enumerate(inv):
        if i == pos:
            rows.append(top)
        elif u[i]:
            f = u[i]
            rows.append([a - f * b for a, b in zip(row, top)])
        else:
            rows.append(list(row))
    cone.__dict__["inverse"] = rows
    cone.__dict__["det"] = parent.det * pivot


def cones_of_graph(g: ExchangeGraph) -> tuple[list[Cone], list[str]]:
    """Cones of every seed in enumeration order, plus unimodularity failures.

    The initial cone is inverted directly; every other cone inherits its
    inverse from the seed it was discovered from, which is exact and proves
    ``det = +-1`` along the way.
    """
    frozen = tuple(frozen_arrays(g.n))
    k0 = g.initial_key
    parent: dict[SeedKey, tuple[SeedKey, tuple[int, int]]] = {}
    for src, v, dst, _, _ in g.edges:
        if dst != k0 and dst not in parent:
            parent[dst] = (src, v)
    built: dict[SeedKey, Cone] = {}
    failures: list[str] = []
    for key, seed in g.seeds.items():
        try:
            if key not in parent:
                cone = cone_of_seed(seed)
            else:
                src, v = parent[key]
                base = built.get(src)
                if base is None:
                    failures.append(f"cone {key_to_str(key)} descends from a non-unimodular cone")
                    continue
                cone = Cone(seed.n, tuple(seed.mutable_labels()) + frozen, key)
                pos = g.seeds[src].quiver.mutable.index(v)
                same = all(a == b for i, (a, b) in enumerate(zip(cone.generators, base.generators)) if i != pos)
                if same:
                    _inherit_inverse(cone, base, pos)
                elif abs(cone.det) != 1:
                    raise NotUnimodular(f"cone {key_to_str(key)} has determinant {cone.det}")
        except NotUnimodular as exc:
            failures.append(str(exc))
            continue
        built[key] = cone
    return list(built.values()), failures


def _seed_key(seed: Seed) -> SeedKey:
    from .cluster import seed_key

    return seed_key(seed)


def _as_point(p: Array | Sequence) -> list:
    return list(p.entries) if isinstance(p, Array) else list(p)


def cone_membership(p: Array | Sequence, cone: Cone) -> Location:
    point = _as_point(p)
    if len(point) != cone.dim:
        raise SizeMismatch(f"point of dimension {len(point)} against a cone in dimension {cone.dim}")
    lam = cone.coefficients(point)
    if any(v < 0 for v in lam):
        return Location.OUTSIDE
    if all(v > 0 for v in lam):
        return Location.INTERIOR
    return Location.BOUNDARY


def interiors_intersect(c1: Cone, c2: Cone) -> tuple[bool, list[Fraction] | None]:
    """Whether the open cones meet; returns a common interior point if so.

    Solves ``G1 l = G2 m`` with ``l >= 1`` and ``m >= 1``.  Cones are closed
    under positive scaling, so ``>= 1`` is equivalent to ``> 0``.  Substituting
    ``l = 1 + l'``, ``m = 1 + m'`` leaves a standard-form system in ``l', m' >= 0``.
    """
    _same_n(c1, c2)
    d = c1.dim
    g1, g2 = c1.matrix, c2.matrix
    a_eq = [list(g1[r]) + [-v for v in g2[r]] for r in range(d)]
    b_eq = [sum(g2[r]) - sum(g1[r]) for r in range(d)]
    sol = find_feasible(a_eq, b_eq, nvars=2 * d)
    if sol is None:
        return False, None
    lam = [1 + v for v in sol[:d]]
    return True, linalg.mat_vec(g1, lam)


def _same_n(c1: Cone, c2: Cone) -> None:
    if c1.n != c2.n:
        raise SizeMismatch("cones of different sizes")


def face_check(c1: Cone, c2: Cone, method: str = "reduced") -> bool:
    """True iff ``c1`` and ``c2`` meet exactly in the face spanned by their common generators.

    ``method="direct"`` solves ``G1 l = G2 m``, ``l, m >= 0``,
    ``sum(l_i, i not shared) >= 1`` as stated; the intersection lies in the
    common face iff that system is infeasible.

    ``method="reduced"`` eliminates ``l = G1^-1 G2 m``.  A shared generator of
    ``c2`` maps to a unit vector on a shared row, so shared rows and columns
    drop out and what remains is: ``v >= 0``, ``N v >= 0``, ``1.N v >= 1``
    with ``N`` the non-shared block of ``G1^-1 G2``.  Column sums of ``N``
    all ``<= 0`` certify infeasibility without an LP.
    """
    _same_n(c1, c2)
    shared = c1.generator_set & c2.generator_set
    s1 = [i for i, g in enumerate(c1.generators) if g not in shared]
    s2 = [j for j, g in enumerate(c2.generators) if g not in shared]
    if not s1:
        return True
    if method == "direct":
        d = c1.dim
        g1, g2 = c1.matrix, c2.matrix
        a_eq = [list(g1[r]) + [-v for v in g2[r]] for r in range(d)]
        ge = [[1 if i in s1 else 0 for i in range(d)] + [0] * d]
        return find_feasible(a_eq, [0] * d, ge, [1], nvars=2 * d) is None
    if method != "reduced":
        raise ValueError(f"unknown method {method!r}")
    inv = c1.inverse
    cols = [[c2.matrix[r][j] for r in range(c1.dim)] for j in s2]
    block = [[sum(inv[i][r] * col[r] for r in range(c1.dim)) for col in cols] for i in s1]
    return _reduced_infeasible(block)


def _reduced_infeasible(block: Sequence[Sequence[int]]) -> bool:
    k = len(block[0]) if block else 0
    if k == 0:
        return True
    colsum = [sum(block[i][j] for i in range(len(block))) for j in range(k)]
    if all(c <= 0 for c in colsum):
        return True
    return find_feasible(a_ge=[list(r) for r in block] + [colsum],
                         b_ge=[0] * len(block) + [1], nvars=k) is None


@dataclass
class FanReport:
    n: int
    cones: int
    pairwise_mode: str
    unimodular_failures: list[str] = field(default_factory=list)
    adjacency_checked: int = 0
    adjacency_failures: list[str] = field(default_factory=list)
    pairs_total: int = 0
    pairs_checked: int = 0
    pairs_certified_by_column_sums: int = 0
    pairs_solved_by_lp: int = 0
    face_failures: list[tuple[str, str]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.unimodular_failures or self.adjacency_failures or self.face_failures)

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["ok"] = self.ok
        out["face_failures"] = [list(p) for p in self.face_failures]
        return out


class _ConeTable:
    """All cones of a graph with the arrays needed for batched sweeps."""

    def __init__(self, cones: list[Cone]):
        self.cones = cones
        self.n = cones[0].n
        d = dimension(self.n)
        m = d - (2 * self.n - 1)
        self.m = m
        ids: dict[Array, int] = {}
        for c in cones:
            for g in c.generators[:m]:
                ids.setdefault(g, len(ids))
        self.ray_ids = ids
        self.mut_ids = np.array([[ids[g] for g in c.generators[:m]] for c in cones], dtype=np.int64).reshape(len(cones), m)
        gens = np.array([c.matrix for c in cones], dtype=np.int64)  # (K, d, d) columns = generators
        self.gens = gens
        invs = [c.inverse for c in cones]
        _int64_safe(invs, [c.matrix for c in cones], d)
        self.invs = np.array(invs, dtype=np.int64)  # (K, d, d)

    def reduced_blocks(self, a: int, others: np.ndarray) -> np.ndarray:
        """Mutable-row x mutable-column blocks of ``G_a^-1 G_b`` for each ``b`` in ``others``."""
        rows = self.invs[a, : self.m, :]  # (m, d)
        cols = self.gens[others][:, :, : self.m]  # (B, d, m)
        return np.einsum("id,bdj->bij", rows, cols)


def _int64_safe(invs, mats, d: int) -> None:
    big = max(max(abs(v) for row in inv for v in row) for inv in invs)
    big2 = max(max(abs(v) for row in mat for v in row) for mat in mats)
    if big * big2 * d >= 2**62 or big * 64 * d >= 2**40:
        raise OverflowError("entries too large for exact int64 sweeps")


def _pair_sample(k: int, count: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    total = k * (k - 1) // 2
    if count >= total:
        return list(combinations(range(k), 2))
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < count:
        a, b = rng.integers(0, k, size=2)
        if a != b:
            chosen.add((min(a, b), max(a, b)))
    return sorted(chosen)


def pairwise_face_sweep(cones: list[Cone], pairs: Iterable[tuple[int, int]] | None = None,
                        report: FanReport | None = None, progress: bool = False) -> FanReport:
    """Batched reduced :func:`face_check` over cone pairs (all pairs by default)."""
    table = _ConeTable(cones)
    k = len(cones)
    rep = report or FanReport(cones[0].n, k, "full")
    if pairs is None:
        by_first = {a: np.arange(a + 1, k) for a in range(k)}
    else:
        grouped: dict[int, list[int]] = {}
        for a, b in pairs:
            grouped.setdefault(a, []).append(b)
        by_first = {a: np.array(bs, dtype=np.int64) for a, bs in grouped.items()}
    last = time.monotonic()
    for a, others in by_first.items():
        if len(others) == 0:
            continue
        blocks = table.reduced_blocks(a, others)  # (B, m, m)
        ida = table.mut_ids[a]
        idb = table.mut_ids[others]  # (B, m)
        row_only = ~(ida[None, :, None] == idb[:, None, :]).any(axis=2)  # gens of a not in b
        col_only = ~(idb[:, :, None] == ida[None, None, :]).any(axis=2)  # gens of b not in a
        colsum = (blocks * row_only[:, :, None]).sum(axis=1)
        certified = ((colsum <= 0) | ~col_only).all(axis=1)
        rep.pairs_checked += len(others)
        rep.pairs_certified_by_column_sums += int(certified.sum())
        for t in np.nonzero(~certified)[0]:
            rows = np.nonzero(row_only[t])[0]
            cols = np.nonzero(col_only[t])[0]
            block = [[int(blocks[t, i, j]) for j in cols] for i in rows]
            rep.pairs_solved_by_lp += 1
            if not _reduced_infeasible(block):
                b = int(others[t])
                rep.face_failures.append((key_to_str(cones[a].seed_key), key_to_str(cones[b].seed_key)))
        if progress and time.monotonic() - last > 5:
            last = time.monotonic()
            log.info("face sweep: %d pairs checked", rep.pairs_checked)
    return rep


def verify_fan(g: ExchangeGraph, pairwise: str = "full", sample_pairs: int = 20000,
               rng_seed: int = 0, progress: bool = False) -> FanReport:
    """Unimodularity, facet pairing across mutations, and pairwise face checks.

    ``pairwise="full"`` checks every unordered pair; ``"sampled"`` checks
    ``sample_pairs`` random pairs.  For ``n >= 6`` (never a complete fan)
    the sweep is always sampled.
    """
    if pairwise not in ("full", "sampled"):
        raise ValueError(f"unknown pairwise mode {pairwise!r}")
    if g.n >= 6:
        pairwise = "sampled"
    t0 = time.monotonic()
    rep = FanReport(g.n, len(g.seeds), pairwise)
    cones, failures = cones_of_graph(g)
    rep.unimodular_failures.extend(failures)
    index = {c.seed_key: i for i, c in enumerate(cones)}

    d = dimension(g.n)
    for src, _, dst, old, new in g.edges:
        if src == dst or src not in index or dst not in index:
            continue
        a, b = cones[index[src]].generator_set, cones[index[dst]].generator_set
        rep.adjacency_checked += 1
        if len(a & b) != d - 1 or a - b != {old} or b - a != {new}:
            rep.adjacency_failures.append(f"{key_to_str(src)} -> {key_to_str(dst)}")

    if cones:
        k = len(cones)
        rep.pairs_total = k * (k - 1) // 2
        pairs = None
        if pairwise == "sampled":
            pairs = _pair_sample(k, sample_pairs, np.random.default_rng(rng_seed))
        pairwise_face_sweep(cones, pairs, rep, progress)
    rep.elapsed = time.monotonic() - t0
    return rep


# -- coverage ---------------------------------------------------------------


def d_tight_matrix(n: int) -> np.ndarray:
    """Rows ``c`` with ``c . a <= 0`` exactly the D-tight inequalities (flat entry order)."""
    pos = {ij: k for k, ij in enumerate(triangle_index(n))}
    rows = []
    for j in range(1, n):
        for i in range(1, n + 1):
            c = [0] * dimension(n)
            for k in range(1, i + 1):
                if (k, j + 1) in pos:
                    c[pos[k, j + 1]] += 1
            for k in range(1, i):
                if (k, j) in pos:
                    c[pos[k, j]] -= 1
            rows.append(c)
    return np.array(rows, dtype=np.int64)


def sample_d_tight(n: int, count: int, rng: np.random.Generator, bound: int = 8,
                   batch: int = 200_000) -> tuple[np.ndarray, int]:
    """Uniform integer arrays with entries in ``0..bound`` conditioned on D-tightness.

    Returns the accepted points and the number of draws it took.  The
    inequality test runs as a float32 matrix product; every value involved is
    an integer of magnitude at most ``bound * d``, far below ``2**24``, so the
    test is exact.
    """
    cmat = d_tight_matrix(n)
    d = dimension(n)
    if bound * d * int(np.abs(cmat).max()) >= 2**24 or bound > 255:
        raise OverflowError("bound too large for exact sampling")
    cf = cmat.T.astype(np.float32)
    out = []
    got = draws = 0
    while got < count:
        cand = rng.integers(0, bound + 1, size=(batch, d), dtype=np.uint8)
        draws += batch
        ok = (cand.astype(np.float32) @ cf <= 0).all(axis=1)
        acc = cand[ok].astype(np.int64)
        out.append(acc)
        got += len(acc)
    pts = np.concatenate(out)[:count]
    return pts, draws


@dataclass
class CoverageReport:
    n: int
    samples: int
    draws: int
    covered: int
    uncovered: int
    double_interior: int
    interior_hits: int
    max_cover: int
    cover_histogram: dict[int, int]
    uncovered_witnesses: list[list[list[int]]]
    truncated_enumeration: bool
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.uncovered == 0 and self.double_interior == 0

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["ok"] = self.ok
        out["cover_histogram"] = {str(k): v for k, v in sorted(self.cover_histogram.items())}
        return out


def locate_points(cones: list[Cone], points: np.ndarray, chunk: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Per point: number of cones containing it, and number containing it in their interior.

    The coefficient products run through float64 matrix multiplication.  All
    operands are integers and every partial sum is bounded by
    ``max|inv| * max|p| * d < 2**53``, so each float is an exact integer.
    """
    table = _ConeTable(cones)
    d = points.shape[1]
    big = int(np.abs(points).max()) if points.size else 0
    if big * int(np.abs(table.invs).max()) * d >= 2**53:
        raise OverflowError("points too large for exact location")
    invs = table.invs.reshape(-1, d).astype(np.float64)  # (K*d, d)
    k = len(cones)
    cover = np.zeros(len(points), dtype=np.int64)
    inner = np.zeros(len(points), dtype=np.int64)
    for s in range(0, len(points), chunk):
        block = points[s:s + chunk].astype(np.float64)
        lam = (invs @ block.T).reshape(k, d, -1)  # (K, d, B)
        cover[s:s + chunk] = (lam >= 0).all(axis=1).sum(axis=0)
        inner[s:s + chunk] = (lam > 0).all(axis=1).sum(axis=0)
    return cover, inner


def coverage(g: ExchangeGraph, samples: int = 10000, rng_seed: int = 0, bound: int = 8) -> CoverageReport:
    """Locate random integer D-tight arrays among the seed cones."""
    t0 = time.monotonic()
    rng = np.random.default_rng(rng_seed)
    cones, _ = cones_of_graph(g)
    pts, draws = sample_d_tight(g.n, samples, rng, bound)
    cover, inner = locate_points(cones, pts)
    hist: dict[int, int] = {}
    for c in cover.tolist():
        hist[c] = hist.get(c, 0) + 1
    witnesses = [Array(g.n, tuple(int(v) for v in p)).rows() for p in pts[cover == 0][:20]]
    return CoverageReport(
        n=g.n, samples=len(pts), draws=draws,
        covered=int((cover > 0).sum()), uncovered=int((cover == 0).sum()),
        double_interior=int((inner > 1).sum()), interior_hits=int((inner > 0).sum()),
        max_cover=int(cover.max()) if len(cover) else 0, cover_histogram=hist,
        uncovered_witnesses=witnesses, truncated_enumeration=g.truncated,
        elapsed=time.monotonic() - t0,
    )


# -- quotient by the frozen arrays ------------------------------------------


@dataclass
class ProjectedFan:
    n: int
    basis: list[Array]
    projection: list[list[int]]  # (m x d) integer matrix
    rays: dict[Array, tuple[int, ...]]
    cones: list[tuple[Array, ...]]

    def project(self, a: Array | Sequence[int]) -> tuple[int, ...]:
        return tuple(linalg.mat_vec(self.projection, _as_point(a)))

    def cone_dets(self) -> list[int]:
        return [linalg.det(linalg.transpose([self.rays[r] for r in c])) for c in self.cones]


def initial_basis_vertices(n: int) -> list[tuple[int, int]]:
    """Initial mutable vertices ordered by the largest entry of their interval, then start.

    For ``n = 4`` this is ``(3,1), (2,2), (2,1)``, i.e. the minors of ``{3}``,
    ``{2,3}`` and ``{2}``.
    """
    verts = [(i, j) for i in range(2, n + 1) for j in range(1, n + 1 - i)]
    return sorted(verts, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))


def quotient_project(g: ExchangeGraph) -> ProjectedFan:
    """Project every ray and cone to the quotient by the span of the frozen arrays.

    Coordinates: the initial seed's mutable labels, ordered by
    :func:`initial_basis_vertices`, map to the standard basis vectors.
    """
    from .ssyt import interval_column_array

    n = g.n
    basis = [interval_column_array(i, j, n) for (i, j) in initial_basis_vertices(n)]
    frozen = frozen_arrays(n)
    cols = linalg.transpose([a.entries for a in basis + frozen])
    if linalg.det(cols) == 0:
        raise DegenerateFrozenSpan("frozen arrays and initial labels are not a basis")
    inv = linalg.integer_inverse(cols)
    proj = [list(row) for row in inv[: len(basis)]]
    for a in frozen:
        if any(linalg.mat_vec(proj, a.entries)):
            raise DegenerateFrozenSpan("a frozen array has a nonzero projection")
    rays: dict[Array, tuple[int, ...]] = {}
    cones = []
    for s in g.seeds.values():
        labels = tuple(s.mutable_labels())
        for a in labels:
            if a not in rays:
                rays[a] = tuple(linalg.mat_vec(proj, a.entries))
        cones.append(labels)
    return ProjectedFan(n, basis, proj, rays, cones)
