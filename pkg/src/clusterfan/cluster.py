"""Seeds of the flag-minor cluster structure and exchange-graph enumeration."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import FrozenVertex, LabelCollision, SeedMismatch
from .poly import Polynomial, flag_minor, leading_array, poly_exact_div, product
from .quiver import Quiver, Vertex, initial_quiver, mutate_quiver
from .ssyt import Array, d_tight_violation, interval_column_array, tropical_sum

log = logging.getLogger(__name__)

SeedKey = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ClusterVariable:
    poly: Polynomial
    label: Array

    @classmethod
    def from_poly(cls, poly: Polynomial) -> ClusterVariable:
        return cls(poly, leading_array(poly))


@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    vars: Mapping[Vertex, ClusterVariable]
    n: int

    def label(self, v: Vertex) -> Array:
        return self.vars[v].label

    def mutable_labels(self) -> list[Array]:
        """Labels of the mutable vertices in quiver vertex order."""
        return [self.vars[v].label for v in self.quiver.mutable]

    def frozen_labels(self) -> list[Array]:
        return [self.vars[v].label for v in self.quiver.vertices if v in self.quiver.frozen]


@dataclass(frozen=True)
class ExchangeCertificate:
    """Tropical shadow of one exchange relation.

    ``in_label`` and ``out_label`` are the weighted sums of the neighbours'
    labels; their lex-max minus ``old_label`` must be D-tight and, because the
    leading term of the exchange binomial is the product of leading terms,
    equal to ``new_label``.
    """

    vertex: Vertex
    old_label: Array
    new_label: Array
    in_label: Array
    out_label: Array
    d_tight: bool
    matches_label: bool

    @property
    def ok(self) -> bool:
        return self.d_tight and self.matches_label


def initial_seed(n: int, lower: bool = False) -> Seed:
    """Grid quiver with the interval minor of ``{i, ..., i+j-1}`` at vertex ``(i, j)``.

    ``lower=True`` works with the restriction of every function to lower
    triangular matrices (see :func:`clusterfan.poly.flag_minor`).
    """
    q = initial_quiver(n)
    vars = {}
    for (i, j) in q.vertices:
        poly = flag_minor(range(i, i + j), n, lower)
        var = ClusterVariable.from_poly(poly)
        assert var.label == interval_column_array(i, j, n)
        vars[i, j] = var
    return Seed(q, vars, n)


def exchange_binomial(seed: Seed, v: Vertex) -> tuple[Polynomial, Polynomial]:
    """The two monomials of the exchange relation at ``v``: (in-product, out-product)."""
    q = seed.quiver
    ins = q.incoming(v)
    outs = q.outgoing(v)
    in_poly = product((seed.vars[u].poly ** k for u, k in ins.items()), seed.n)
    out_poly = product((seed.vars[u].poly ** k for u, k in outs.items()), seed.n)
    return in_poly, out_poly


def _label_sum(seed: Seed, weights: Mapping[Vertex, int]) -> Array:
    total = Array.zero(seed.n)
    for u, k in weights.items():
        total = total + seed.vars[u].label.scale(k)
    return total


ExchangeKey = tuple


def exchange_key(seed: Seed, v: Vertex) -> ExchangeKey:
    """Everything the new variable at ``v`` depends on: the old variable and
    the weighted labels on either side of it."""
    q = seed.quiver
    ins = tuple(sorted((seed.vars[u].label.entries, k) for u, k in q.incoming(v).items()))
    outs = tuple(sorted((seed.vars[u].label.entries, k) for u, k in q.outgoing(v).items()))
    return seed.vars[v].label.entries, ins, outs


def mutate_seed(seed: Seed, v: Vertex,
                cache: dict[ExchangeKey, ClusterVariable] | None = None) -> tuple[Seed, ExchangeCertificate]:
    """Mutate at ``v``: new variable = (in-product + out-product) / old variable.

    ``cache`` memoises the division per :func:`exchange_key`; the same
    exchange relation recurs in many seeds.
    """
    q = seed.quiver
    if not q.is_mutable(v):
        raise FrozenVertex(f"vertex {v!r} is frozen")
    old = seed.vars[v]
    key = exchange_key(seed, v) if cache is not None else None
    new_var = cache.get(key) if cache is not None else None
    if new_var is None:
        in_poly, out_poly = exchange_binomial(seed, v)
        new_var = ClusterVariable.from_poly(poly_exact_div(in_poly + out_poly, old.poly))
        if cache is not None:
            cache[key] = new_var

    in_label = _label_sum(seed, q.incoming(v))
    out_label = _label_sum(seed, q.outgoing(v))
    top = tropical_sum(in_label, out_label)
    diff = [a - b for a, b in zip(top.entries, old.label.entries)]
    if min(diff) < 0:
        d_tight, matches = False, False
    else:
        diff_arr = Array(seed.n, tuple(diff))
        d_tight = d_tight_violation(diff_arr) is None
        matches = diff_arr == new_var.label
    cert = ExchangeCertificate(v, old.label, new_var.label, in_label, out_label, d_tight, matches)

    vars = dict(seed.vars)
    vars[v] = new_var
    return Seed(mutate_quiver(q, v), vars, seed.n), cert


def seed_key(seed: Seed) -> SeedKey:
    """Sorted tuple of the mutable labels' entry vectors."""
    return tuple(sorted(a.entries for a in seed.mutable_labels()))


def key_to_str(key: SeedKey) -> str:
    return ";".join(",".join(map(str, e)) for e in key)


@dataclass
class ExchangeGraph:
    n: int
    seeds: dict[SeedKey, Seed] = field(default_factory=dict)
    depth: dict[SeedKey, int] = field(default_factory=dict)
    # (source key, vertex of the source seed, target key, old label, new label)
    edges: list[tuple[SeedKey, Vertex, SeedKey, Array, Array]] = field(default_factory=list)
    variables: dict[Array, ClusterVariable] = field(default_factory=dict)
    mutations: int = 0
    certificate_failures: list[ExchangeCertificate] = field(default_factory=list)
    max_depth_reached: int = 0
    truncated: bool = False
    lower: bool = False

    @property
    def initial_key(self) -> SeedKey:
        return next(iter(self.seeds))

    def adjacency(self) -> dict[SeedKey, set[SeedKey]]:
        adj: dict[SeedKey, set[SeedKey]] = {k: set() for k in self.seeds}
        for a, _, b, _, _ in self.edges:
            if b in adj:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def stats(self) -> dict:
        mutable = mutable_labels(self)
        return {
            "n": self.n,
            "seeds": len(self.seeds),
            "mutable_vars": len(mutable),
            "frozen_vars": 2 * self.n - 1,
            "mutations": self.mutations,
            "max_depth_reached": self.max_depth_reached,
            "truncated": self.truncated,
            "certificate_failures": len(self.certificate_failures),
        }


def mutable_labels(g: ExchangeGraph) -> set[Array]:
    labels = set()
    for s in g.seeds.values():
        labels.update(s.mutable_labels())
    return labels


def _register(g: ExchangeGraph, var: ClusterVariable) -> ClusterVariable:
    """Record ``var`` and return the canonical object for its label."""
    known = g.variables.get(var.label)
    if known is None:
        g.variables[var.label] = var
        return var
    if known.poly != var.poly:
        raise LabelCollision(
            f"label {var.label.rows()} carries two different polynomials:\n  {known.poly}\n  {var.poly}")
    return known


def _check_same_seed(old: Seed, new: Seed) -> None:
    """Seeds with equal keys must agree variable by variable and arrow by arrow."""
    by_label = {s.label: v for v, s in old.vars.items()}
    mapping = {}
    for v, var in new.vars.items():
        u = by_label.get(var.label)
        if u is None:
            raise SeedMismatch(f"label {var.label.rows()} missing from the stored seed")
        if old.vars[u].poly != var.poly:
            raise LabelCollision(f"label {var.label.rows()} carries two different polynomials")
        mapping[v] = u
    if new.quiver.relabel(mapping) != old.quiver:
        raise SeedMismatch("seeds with the same cluster have non-isomorphic quivers")


_WORKER_CACHE: dict = {}


def _mutate_all(seed: Seed, cache: dict | None = None) -> list[tuple[Vertex, Seed, ExchangeCertificate]]:
    if cache is None:
        cache = _WORKER_CACHE
    return [(v, *mutate_seed(seed, v, cache)) for v in seed.quiver.mutable]


def default_jobs() -> int:
    env = os.environ.get("CLUSTERFAN_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def enumerate_seeds(n: int, max_seeds: int | None = None, max_depth: int | None = None,
                    jobs: int = 1, lower: bool = False, progress: bool = False) -> ExchangeGraph:
    """Breadth-first closure of the initial seed under mutation.

    Seeds are deduplicated by :func:`seed_key`; on every key collision the two
    seeds are compared polynomial by polynomial and quiver by quiver.  Each
    BFS level is mutated as a batch (optionally in worker processes) and the
    results are merged in (parent, vertex) order, so the output does not
    depend on ``jobs``.
    """
    g = ExchangeGraph(n, lower=lower)
    start = initial_seed(n, lower)
    k0 = seed_key(start)
    g.seeds[k0] = start
    g.depth[k0] = 0
    for var in start.vars.values():
        _register(g, var)
    frontier = [k0]
    depth = 0
    cache: dict = {}
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        while frontier:
            if max_depth is not None and depth >= max_depth:
                g.truncated = True
                break
            parents = [g.seeds[k] for k in frontier]
            if pool is not None:
                results = list(pool.map(_mutate_all, parents, chunksize=max(1, len(parents) // (4 * jobs))))
            else:
                results = [_mutate_all(s, cache) for s in parents]
            next_frontier = []
            for key, batch in zip(frontier, results):
                for v, child, cert in batch:
                    g.mutations += 1
                    if not cert.ok:
                        g.certificate_failures.append(cert)
                    canon = _register(g, child.vars[v])
                    if canon is not child.vars[v]:
                        child = Seed(child.quiver, {**child.vars, v: canon}, n)
                    ck = seed_key(child)
                    stored = g.seeds.get(ck)
                    if stored is None:
                        if max_seeds is not None and len(g.seeds) >= max_seeds:
                            g.truncated = True
                            continue
                        g.seeds[ck] = child
                        g.depth[ck] = depth + 1
                        g.max_depth_reached = depth + 1
                        next_frontier.append(ck)
                    else:
                        _check_same_seed(stored, child)
                    g.edges.append((key, v, ck, cert.old_label, cert.new_label))
            depth += 1
            frontier = next_frontier
            if progress:
                log.info("n=%d depth=%d seeds=%d frontier=%d", n, depth, len(g.seeds), len(frontier))
    finally:
        if pool is not None:
            pool.shutdown()
    return g


def cluster_variables(g: ExchangeGraph) -> list[ClusterVariable]:
    """Every distinct variable (frozen included), sorted by label.

    Re-checks that a label determines its polynomial across all seeds.
    """
    seen: dict[Array, Polynomial] = {}
    for s in g.seeds.values():
        for var in s.vars.values():
            known = seen.setdefault(var.label, var.poly)
            if known != var.poly:
                raise LabelCollision(
                    f"label {var.label.rows()} carries two different polynomials:\n  {known}\n  {var.poly}")
    return [ClusterVariable(seen[a], a) for a in sorted(seen)]


def frozen_label_set(n: int) -> set[Array]:
    from .ssyt import frozen_arrays

    return set(frozen_arrays(n))


def count_mutable(vars: Iterable[ClusterVariable], n: int) -> int:
    frozen = frozen_label_set(n)
    return sum(1 for v in vars if v.label not in frozen)
