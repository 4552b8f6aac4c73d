import random
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings

from clusterfan import linalg
from clusterfan.cluster import enumerate_seeds
from clusterfan.errors import SizeMismatch
from clusterfan.fan import (
    Cone,
    FanReport,
    Location,
    cone_membership,
    cone_of_seed,
    cones_of_graph,
    coverage,
    d_tight_matrix,
    face_check,
    initial_basis_vertices,
    interiors_intersect,
    locate_points,
    pairwise_face_sweep,
    quotient_project,
    sample_d_tight,
    verify_fan,
)
from clusterfan.reproduce import N4_PROJECTED_RAYS, N4_TWO_COLUMN, N4_TWO_COLUMN_RAY
from clusterfan.ssyt import Array, Tableau, column_array, dimension, frozen_arrays, is_d_tight, tableau_to_array

from conftest import d_tight_arrays, graph


def _replace(cone: Cone, pos: int, new: Array) -> Cone:
    gens = list(cone.generators)
    gens[pos] = new
    return Cone(cone.n, tuple(gens))


def _add(a: Array, b: Array) -> Array:
    return Array(a.n, tuple(x + y for x, y in zip(a.entries, b.entries)))


def test_initial_cone_n3(g3):
    cones, failures = cones_of_graph(g3)
    assert not failures and len(cones) == 2
    c0 = cones[0]
    assert c0.generators[0] == column_array((2,), 3)
    assert c0.generators[1:] == tuple(frozen_arrays(3))
    assert abs(c0.det) == 1


def test_cone_membership_examples(g4):
    c = cones_of_graph(g4)[0][0]
    total = c.sum_of_generators()
    assert cone_membership(total, c) == Location.INTERIOR
    assert cone_membership(c.generators[0], c) == Location.BOUNDARY
    assert cone_membership([-v for v in c.generators[0].entries], c) == Location.OUTSIDE
    with pytest.raises(SizeMismatch):
        cone_membership([1, 2], c)


def test_cone_with_itself(g4):
    c = cones_of_graph(g4)[0][0]
    meet, witness = interiors_intersect(c, c)
    assert meet
    assert cone_membership(witness, c) == Location.INTERIOR
    assert face_check(c, c)
    assert face_check(c, c, method="direct")


def test_two_n3_cones_are_adjacent(g3):
    a, b = cones_of_graph(g3)[0]
    assert interiors_intersect(a, b) == (False, None)
    assert face_check(a, b) and face_check(b, a)
    assert len(a.generator_set & b.generator_set) == dimension(3) - 1


def test_adjacent_n4_cones_have_disjoint_interiors(g4):
    cones, _ = cones_of_graph(g4)
    index = {c.seed_key: c for c in cones}
    pairs = {tuple(sorted((a, b))) for a, _, b, _, _ in g4.edges}
    assert len(pairs) == 21
    for a, b in pairs:
        assert interiors_intersect(index[a], index[b])[0] is False


def test_reduced_and_direct_face_checks_agree_on_n4(g4):
    cones, _ = cones_of_graph(g4)
    pairs = list(combinations(cones, 2))
    assert len(pairs) == 91
    for a, b in pairs:
        assert face_check(a, b) is True
        assert face_check(a, b, method="direct") is True


def test_face_check_rejects_overlapping_cones(g4):
    """Replacing a generator by its sum with a neighbour gives a cone that
    still shares d-1 generators but overlaps the original in a non-face."""
    c = cones_of_graph(g4)[0][0]
    bad = _replace(c, 0, _add(c.generators[0], c.generators[1]))
    assert abs(bad.det) == 1
    assert not face_check(c, bad)
    assert not face_check(c, bad, method="direct")
    assert not face_check(bad, c)
    assert interiors_intersect(c, bad)[0]
    with pytest.raises(ValueError):
        face_check(c, bad, method="guess")


def test_pairwise_sweep_reports_overlap(g4):
    cones, _ = cones_of_graph(g4)
    c = cones[0]
    bad = _replace(c, 0, _add(c.generators[0], c.generators[1]))
    rep = verify_fan(g4)
    assert rep.ok and not rep.face_failures
    rep2 = FanReport(4, len(cones) + 1, "full")
    pairwise_face_sweep(cones + [bad], None, rep2)
    assert rep2.face_failures


def test_random_points_agree_between_membership_and_sympy(g4):
    rng = random.Random(0)
    cones, _ = cones_of_graph(g4)
    for _ in range(50):
        c = rng.choice(cones)
        p = [rng.randint(-4, 4) for _ in range(c.dim)]
        lam = sympy.Matrix(c.matrix).LUsolve(sympy.Matrix(p))
        if any(v < 0 for v in lam):
            expected = Location.OUTSIDE
        elif all(v > 0 for v in lam):
            expected = Location.INTERIOR
        else:
            expected = Location.BOUNDARY
        assert cone_membership(p, c) == expected


@pytest.mark.parametrize("n", [3, 4])
def test_verify_fan_small(n, g3, g4):
    g = {3: g3, 4: g4}[n]
    rep = verify_fan(g)
    assert rep.ok
    assert rep.cones == len(g.seeds)
    assert rep.pairs_checked == rep.pairs_total == len(g.seeds) * (len(g.seeds) - 1) // 2
    assert rep.adjacency_checked == len(g.edges)
    assert rep.pairs_certified_by_column_sums + rep.pairs_solved_by_lp <= rep.pairs_checked


def test_verify_fan_sampled_mode(g4):
    rep = verify_fan(g4, pairwise="sampled", sample_pairs=30, rng_seed=3)
    assert rep.ok and rep.pairs_checked == 30
    with pytest.raises(ValueError):
        verify_fan(g4, pairwise="some")


@pytest.mark.parametrize("n", [4, 5])
def test_incremental_inverses_match_direct_inverse(n, g4, g5):
    g = {4: g4, 5: g5}[n]
    cones, failures = cones_of_graph(g)
    assert not failures
    for c in cones[:: max(1, len(cones) // 40)]:
        fresh = Cone(c.n, c.generators)
        assert c.inverse == linalg.integer_inverse(fresh.matrix)
        assert c.det == linalg.det(fresh.matrix)
        assert abs(c.det) == 1


def test_cone_of_seed_matches_graph_cones(g4):
    cones, _ = cones_of_graph(g4)
    for seed, cone in zip(g4.seeds.values(), cones):
        assert cone_of_seed(seed).generators == cone.generators


def test_d_tight_matrix_agrees_with_predicate():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4, 5):
        cmat = d_tight_matrix(n)
        for _ in range(300):
            p = rng.integers(0, 4, size=dimension(n))
            assert bool((cmat @ p <= 0).all()) == is_d_tight(Array(n, tuple(int(v) for v in p)))


@settings(max_examples=200, deadline=None)
@given(d_tight_arrays(min_n=2, max_n=6))
def test_tableau_arrays_satisfy_inequalities(a):
    assert (d_tight_matrix(a.n) @ np.array(a.entries) <= 0).all()


def test_sampler_returns_d_tight_arrays():
    pts, draws = sample_d_tight(4, 500, np.random.default_rng(1))
    assert pts.shape == (500, dimension(4)) and draws >= 500
    assert pts.min() >= 0 and pts.max() <= 8
    assert all(is_d_tight(Array(4, tuple(int(v) for v in p))) for p in pts)


def test_locate_points_counts(g3):
    cones, _ = cones_of_graph(g3)
    inside = np.array([cones[0].sum_of_generators()])
    shared = np.array([list(frozen_arrays(3)[0].entries)])
    cover, inner = locate_points(cones, np.vstack([inside, shared]))
    assert cover.tolist() == [1, 2]
    assert inner.tolist() == [1, 0]


@pytest.mark.parametrize("n,samples", [(3, 1000), (4, 10000)])
def test_coverage_small(n, samples, g3, g4):
    g = {3: g3, 4: g4}[n]
    rep = coverage(g, samples=samples, rng_seed=5)
    assert rep.samples == samples
    assert rep.uncovered == 0 and rep.double_interior == 0
    assert rep.ok and not rep.truncated_enumeration


def test_coverage_reports_gaps_for_partial_graph():
    g = enumerate_seeds(4, max_seeds=3)
    rep = coverage(g, samples=2000, rng_seed=1)
    assert rep.truncated_enumeration
    assert rep.uncovered > 0 and rep.uncovered_witnesses
    assert rep.covered + rep.uncovered == rep.samples


def test_initial_basis_order():
    assert initial_basis_vertices(4) == [(3, 1), (2, 2), (2, 1)]
    assert len(initial_basis_vertices(6)) == 10


def test_quotient_projection_n4(g4):
    proj = quotient_project(g4)
    for cols, ray in N4_PROJECTED_RAYS.items():
        assert proj.rays[column_array(cols, 4)] == ray
    two = tableau_to_array(Tableau.from_columns(4, N4_TWO_COLUMN))
    assert proj.rays[two] == N4_TWO_COLUMN_RAY
    assert proj.project(two) == tuple(
        x + y for x, y in zip(proj.project(column_array((1, 2, 4), 4)), proj.project(column_array((3,), 4))))
    assert len(proj.rays) == 9
    for f in frozen_arrays(4):
        assert proj.project(f) == (0, 0, 0)
    assert all(abs(d) == 1 for d in proj.cone_dets())


@pytest.mark.parametrize("n", [3, 5])
def test_quotient_projection_cones_unimodular(n, g3, g5):
    proj = quotient_project({3: g3, 5: g5}[n])
    assert len(proj.cones) == len({3: g3, 5: g5}[n].seeds)
    assert all(abs(d) == 1 for d in proj.cone_dets())


@settings(max_examples=100, deadline=None)
@given(d_tight_arrays(min_n=4, max_n=4), d_tight_arrays(min_n=4, max_n=4))
def test_projection_is_additive(a, b):
    proj = quotient_project(graph(4))
    assert proj.project(a + b) == tuple(x + y for x, y in zip(proj.project(a), proj.project(b)))
