"""Named reproduction checks: each compares a published number or list with a recomputation.

A :class:`Workspace` caches the expensive enumerations so that running every
check costs one enumeration per ``n``.  Every check returns a
:class:`CheckResult` with the expected value, the computed value and a
verdict.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .cluster import ExchangeGraph, cluster_variables, enumerate_seeds, mutable_labels
from .errors import ClusterFanError
from .fan import coverage, quotient_project, verify_fan
from .poly import evaluate, flag_minor, leading_array, pascal_matrix
from .quiver import Quiver, mutate_quiver
from .ssyt import Array, Tableau, column_array, column_set_of, frozen_arrays, tableau_to_array

log = logging.getLogger(__name__)


# -- reference data ----------------------------------------------------------

N4_PROJECTED_RAYS: dict[tuple[int, ...], tuple[int, int, int]] = {
    (3,): (1, 0, 0),
    (1, 4): (-1, 0, 0),
    (2, 3): (0, 1, 0),
    (1, 2, 4): (0, -1, 0),
    (2,): (0, 0, 1),
    (1, 3, 4): (0, 0, -1),
    (2, 4): (-1, 0, 1),
    (1, 3): (0, 1, -1),
}
N4_TWO_COLUMN = ((1, 2, 4), (3,))
N4_TWO_COLUMN_RAY = (1, -1, 0)

# (left side, right side) as lists of one-column sets
N4_RELATIONS = (
    (((3,), (1, 4)), ((1,), (3, 4))),
    (((2,), (1, 3, 4)), ((1,), (2, 3, 4))),
    (((2, 3), (1, 2, 4)), ((1, 2), (2, 3, 4))),
    (((2,), (1, 4)), ((1,), (2, 4))),
    (((2, 3), (1, 3, 4)), ((1, 3), (2, 3, 4))),
)

# two-column labels for n = 5, tableau rows listed bottom row first
N5_TWO_COLUMN_ROWS = (
    ((1, 3), (2,), (4,)),
    ((1, 3), (2,), (5,)),
    ((1, 4), (2,), (5,)),
    ((2, 4), (3,), (5,)),
    ((1, 4), (3,), (5,)),
    ((1, 3), (2, 5), (4,)),
    ((1, 2), (3, 4), (5,)),
    ((1, 4), (2,), (3,), (5,)),
    ((1, 3), (2, 4), (3,), (5,)),
    ((1, 2), (2, 4), (3,), (5,)),
    ((1, 1), (2, 4), (3,), (5,)),
    ((1, 3), (2,), (4,), (5,)),
    ((1, 3), (2, 4), (4,), (5,)),
    ((1, 3), (2, 5), (4,), (5,)),
)


# -- independent exchange-matrix mutation ------------------------------------


def matrix_mutation(b: list[list[int]], k: int) -> list[list[int]]:
    """Textbook exchange-matrix mutation at index ``k``.

    ``b'[i][j] = -b[i][j]`` if ``k`` is ``i`` or ``j``, otherwise
    ``b[i][j] + sign(b[i][k]) * max(0, b[i][k] * b[k][j])``.
    """
    size = len(b)
    out = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if i == k or j == k:
                out[i][j] = -b[i][j]
            else:
                bik = b[i][k]
                sign = (bik > 0) - (bik < 0)
                out[i][j] = b[i][j] + sign * max(0, bik * b[k][j])
    return out


def quiver_matrix(q: Quiver) -> list[list[int]]:
    return [[q.weight(u, v) for v in q.vertices] for u in q.vertices]


def _agree_off_frozen(q: Quiver, b: list[list[int]]) -> bool:
    """Compare weights on every pair with at least one mutable endpoint."""
    vs = q.vertices
    for i, u in enumerate(vs):
        for j, v in enumerate(vs):
            if u in q.frozen and v in q.frozen:
                continue
            if q.weight(u, v) != b[i][j]:
                return False
    return True


def random_quiver(rng: random.Random, max_vertices: int = 12, max_weight: int = 2) -> Quiver:
    size = rng.randint(2, max_vertices)
    verts = list(range(size))
    n_frozen = rng.randint(0, size - 1)
    frozen = set(rng.sample(verts, n_frozen))
    arrows = {}
    for u in verts:
        for v in verts:
            if u < v and not (u in frozen and v in frozen):
                w = rng.randint(-max_weight, max_weight)
                if w:
                    arrows[u, v] = w
    return Quiver(verts, frozen, arrows)


@dataclass
class OracleReport:
    cases: int = 0
    steps: int = 0
    mismatches: int = 0
    involution_failures: int = 0
    skew_failures: int = 0

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.involution_failures or self.skew_failures)


def oracle_comparison(cases: int = 1000, rng_seed: int = 0, max_steps: int = 8) -> OracleReport:
    """Random quivers and mutation sequences, checked step by step against :func:`matrix_mutation`."""
    rng = random.Random(rng_seed)
    rep = OracleReport()
    for _ in range(cases):
        q = random_quiver(rng)
        b = quiver_matrix(q)
        rep.cases += 1
        for _ in range(rng.randint(1, max_steps)):
            v = rng.choice(q.mutable)
            k = q.vertices.index(v)
            q2 = mutate_quiver(q, v)
            b = matrix_mutation(b, k)
            rep.steps += 1
            if not _agree_off_frozen(q2, b):
                rep.mismatches += 1
            if mutate_quiver(q2, v) != q:
                rep.involution_failures += 1
            if any(q2.weight(x, y) != -q2.weight(y, x) for x in q2.vertices for y in q2.vertices):
                rep.skew_failures += 1
            q = q2
    return rep


# -- the checks -----------------------------------------------------------------


@dataclass
class CheckResult:
    id: str
    description: str
    expected: str
    computed: str
    ok: bool
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Workspace:
    """Shared state for a run: cached enumerations and the run options."""

    pairwise: str = "full"
    samples: int = 10000
    rng_seed: int = 0
    jobs: int = 1
    explore_n: int = 6
    explore_depth: int = 6
    explore_max_seeds: int = 50000
    graphs: dict[int, ExchangeGraph] = field(default_factory=dict)
    timings: dict[int, float] = field(default_factory=dict)
    explore: ExchangeGraph | None = None

    def graph(self, n: int) -> ExchangeGraph:
        if n not in self.graphs:
            t0 = time.monotonic()
            self.graphs[n] = enumerate_seeds(n, jobs=self.jobs)
            self.timings[n] = time.monotonic() - t0
            log.info("n=%d enumerated in %.1fs", n, self.timings[n])
        return self.graphs[n]

    def exploration(self) -> ExchangeGraph:
        if self.explore is None:
            t0 = time.monotonic()
            self.explore = enumerate_seeds(self.explore_n, max_depth=self.explore_depth,
                                           max_seeds=self.explore_max_seeds, jobs=self.jobs)
            log.info("n=%d explored to depth %d in %.1fs", self.explore_n, self.explore_depth,
                     time.monotonic() - t0)
        return self.explore

    def small_graphs(self) -> list[ExchangeGraph]:
        return [self.graph(n) for n in (3, 4, 5)]


CheckFn = Callable[[Workspace], tuple[str, str, bool]]
CHECKS: dict[str, tuple[str, CheckFn]] = {}


def check(name: str, description: str) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        CHECKS[name] = (description, fn)
        return fn
    return register


@check("n3-seeds", "n=3 is finite type: 2 seeds, mutable variables D_2 and D_13")
def _n3(ws: Workspace):
    g = ws.graph(3)
    polys = {v.poly for v in cluster_variables(g) if v.label not in set(frozen_arrays(3))}
    expected = {flag_minor((2,), 3), flag_minor((1, 3), 3)}
    ok = len(g.seeds) == 2 and polys == expected
    return "seeds=2 mutable={D_2, D_13}", f"seeds={len(g.seeds)} mutable_vars={len(polys)}", ok


@check("n4-seeds", "n=4: 14 seeds, enumerated in under 10 s")
def _n4_seeds(ws: Workspace):
    g = ws.graph(4)
    t = ws.timings.get(4, 0.0)
    return "seeds=14 time<10s", f"seeds={len(g.seeds)} time={t:.2f}s", len(g.seeds) == 14 and t < 10


@check("n4-variables", "n=4: 9 mutable variables, 8 flag minors and one two-column tableau {1,2,4},{3}")
def _n4_vars(ws: Workspace):
    g = ws.graph(4)
    labels = mutable_labels(g)
    by_label = g.variables
    minors = [a for a in labels if column_set_of(a) is not None]
    minors_ok = all(by_label[a].poly == flag_minor(column_set_of(a), 4) for a in minors)
    others = [a for a in labels if column_set_of(a) is None]
    two_col = tableau_to_array(Tableau.from_columns(4, N4_TWO_COLUMN))
    ok = len(labels) == 9 and len(minors) == 8 and minors_ok and others == [two_col]
    computed = (f"mutable={len(labels)} flag_minors={len(minors)} polys_match={minors_ok} "
                f"others={[array_to_rows(a) for a in others]}")
    return "mutable=9 flag_minors=8 others=[4/2/1 3]", computed, ok


def array_to_rows(a: Array) -> str:
    from .ssyt import array_to_tableau

    return array_to_tableau(a).render()


@check("n4-rays", "n=4: projected coordinates of all nine mutable rays in the basis (3, 23, 2)")
def _n4_rays(ws: Workspace):
    proj = quotient_project(ws.graph(4))
    expected = {column_array(c, 4): v for c, v in N4_PROJECTED_RAYS.items()}
    expected[tableau_to_array(Tableau.from_columns(4, N4_TWO_COLUMN))] = N4_TWO_COLUMN_RAY
    bad = {array_to_rows(a): proj.rays.get(a) for a, v in expected.items() if proj.rays.get(a) != v}
    extra = set(proj.rays) - set(expected)
    ok = not bad and not extra
    return "9 rays as listed", f"mismatches={bad} unexpected={len(extra)}", ok


@check("n4-relations", "n=4: the five linear relations among one-column arrays")
def _n4_relations(ws: Workspace):
    proj = quotient_project(ws.graph(4))
    failures = []
    for lhs, rhs in N4_RELATIONS:
        left = column_array(lhs[0], 4) + column_array(lhs[1], 4)
        right = column_array(rhs[0], 4) + column_array(rhs[1], 4)
        if left != right:
            failures.append(f"{lhs}!={rhs}")
        if proj.project(left) != proj.project(right):
            failures.append(f"projection {lhs}!={rhs}")
    return "5 identities hold", f"failures={failures}", not failures


@check("n5-counts", "n=5: 672 seeds, 36 mutable rays, 9 frozen rays, under 15 min")
def _n5_counts(ws: Workspace):
    g = ws.graph(5)
    labels = mutable_labels(g)
    frozen = set(frozen_arrays(5))
    frozen_everywhere = all(set(s.frozen_labels()) == frozen for s in g.seeds.values())
    t = ws.timings.get(5, 0.0)
    ok = len(g.seeds) == 672 and len(labels) == 36 and len(frozen) == 9 and frozen_everywhere and t < 900
    return ("seeds=672 mutable=36 frozen=9 time<900s",
            f"seeds={len(g.seeds)} mutable={len(labels)} frozen={len(frozen)} time={t:.1f}s", ok)


@check("n5-tableaux", "n=5: the non-one-column labels are exactly the 14 listed two-column tableaux")
def _n5_tableaux(ws: Workspace):
    g = ws.graph(5)
    found = {a for a in mutable_labels(g) if column_set_of(a) is None}
    expected = {tableau_to_array(Tableau(5, rows)) for rows in N5_TWO_COLUMN_ROWS}
    missing = sorted(array_to_rows(a) for a in expected - found)
    extra = sorted(array_to_rows(a) for a in found - expected)
    ok = found == expected
    return "14 tableaux", f"found={len(found)} missing={missing} extra={extra}", ok


@check("leading-terms", "every variable for n=3,4,5 is monic with a triangular D-tight leading exponent")
def _leading(ws: Workspace):
    total = bad = 0
    for g in ws.small_graphs():
        for var in cluster_variables(g):
            total += 1
            try:
                if leading_array(var.poly) != var.label:
                    bad += 1
            except ClusterFanError:
                bad += 1
    return "violations=0", f"variables={total} violations={bad}", bad == 0


@check("label-injective", "the label determines the polynomial and distinct labels give distinct polynomials")
def _injective(ws: Workspace):
    total = collisions = 0
    for g in ws.small_graphs():
        try:
            vars = cluster_variables(g)
        except ClusterFanError:
            collisions += 1
            continue
        total += len(vars)
        collisions += len(vars) - len({v.poly for v in vars})
    return "collisions=0", f"variables={total} collisions={collisions}", collisions == 0


@check("fan", "cones are unimodular and pairwise meet in common faces (n=3,4,5)")
def _fan(ws: Workspace):
    parts = []
    ok = True
    for g in ws.small_graphs():
        rep = verify_fan(g, pairwise=ws.pairwise, rng_seed=ws.rng_seed)
        enough = rep.pairs_checked == rep.pairs_total or rep.pairs_checked >= 20000
        if g.n == 4:
            enough = enough and rep.pairs_checked == 91
        ok = ok and rep.ok and enough
        parts.append(f"n={g.n}: cones={rep.cones} pairs={rep.pairs_checked}/{rep.pairs_total} "
                     f"violations={len(rep.face_failures) + len(rep.unimodular_failures) + len(rep.adjacency_failures)}")
    return "all unimodular, no face violations", "; ".join(parts), ok


@check("coverage", "random D-tight points lie in a cone and in at most one cone interior (n=3,4,5)")
def _coverage(ws: Workspace):
    parts = []
    ok = True
    for g in ws.small_graphs():
        rep = coverage(g, samples=ws.samples, rng_seed=ws.rng_seed)
        ok = ok and rep.ok and rep.samples >= 10000
        parts.append(f"n={g.n}: covered={rep.covered}/{rep.samples} double_interior={rep.double_interior}")
    return "100% covered, 0 double-interior", "; ".join(parts), ok


@check("laurent", "every exchange divides exactly (n=3,4,5 and an n=6 exploration)")
def _laurent(ws: Workspace):
    parts = []
    try:
        for g in ws.small_graphs():
            parts.append(f"n={g.n}: mutations={g.mutations}")
        g6 = ws.exploration()
        parts.append(f"n={g6.n} depth<={g6.max_depth_reached}: mutations={g6.mutations} seeds={len(g6.seeds)}")
    except ClusterFanError as exc:
        return "no failed division", f"{type(exc).__name__}: {exc}", False
    return "no failed division", "; ".join(parts), True


@check("tropical", "the tropical exchange certificate holds at every mutation")
def _tropical(ws: Workspace):
    graphs = ws.small_graphs() + [ws.exploration()]
    muts = sum(g.mutations for g in graphs)
    fails = sum(len(g.certificate_failures) for g in graphs)
    return "failures=0", f"mutations={muts} failures={fails}", fails == 0


@check("positivity", "every variable for n<=5 is positive at the Pascal matrix")
def _positivity(ws: Workspace):
    total = bad = 0
    for g in ws.small_graphs():
        p = pascal_matrix(g.n)
        for var in cluster_variables(g):
            total += 1
            if evaluate(var.poly, p) <= 0:
                bad += 1
    return "non_positive=0", f"variables={total} non_positive={bad}", bad == 0


@check("quiver-oracle", "quiver mutation matches the exchange-matrix formula and is an involution")
def _oracle(ws: Workspace):
    rep = oracle_comparison(1000, ws.rng_seed)
    return ("mismatches=0 involution_failures=0",
            f"cases={rep.cases} steps={rep.steps} mismatches={rep.mismatches} "
            f"involution_failures={rep.involution_failures} skew_failures={rep.skew_failures}", rep.ok)


def run_checks(ws: Workspace, only: list[str] | None = None) -> list[CheckResult]:
    names = list(CHECKS) if not only else only
    unknown = [nm for nm in names if nm not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    results = []
    for name in names:
        description, fn = CHECKS[name]
        t0 = time.monotonic()
        try:
            expected, computed, ok = fn(ws)
        except ClusterFanError as exc:
            expected, computed, ok = "no violation", f"{type(exc).__name__}: {exc}", False
        results.append(CheckResult(name, description, expected, computed, ok, time.monotonic() - t0))
        log.info("%s: %s", name, "ok" if ok else "FAILED")
    return results
