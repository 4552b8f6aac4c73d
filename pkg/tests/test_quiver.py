import json
import random

import pytest

from clusterfan.errors import FrozenVertex
from clusterfan.quiver import Quiver, grid_frozen, initial_quiver, mutate_quiver
from clusterfan.reproduce import matrix_mutation, oracle_comparison, quiver_matrix, random_quiver


def test_q3_shape():
    q = initial_quiver(3)
    assert len(q.vertices) == 6
    assert q.mutable == ((2, 1),)


def test_q5_shape():
    q = initial_quiver(5)
    assert len(q.vertices) == 15
    assert len(q.mutable) == 6 == (5 - 2) * (5 - 1) // 2
    assert len(q.frozen) == 9


def test_frozen_set_is_left_side_and_hypotenuse():
    assert grid_frozen(4) == {(1, 1), (1, 2), (1, 3), (1, 4), (2, 3), (3, 2), (4, 1)}
    assert set(initial_quiver(4).mutable) == {(2, 1), (2, 2), (3, 1)}


@pytest.mark.parametrize("n", [4, 5, 6])
def test_mutable_vertices_are_balanced(n):
    q = initial_quiver(n)
    for v in q.mutable:
        ins, outs = q.in_out_degree(v)
        assert ins == outs


def test_orientation_gives_expected_exchange_neighbours():
    q = initial_quiver(4)
    assert set(q.incoming((2, 2))) == {(2, 3), (3, 1), (1, 2)}
    assert set(q.outgoing((2, 2))) == {(2, 1), (3, 2), (1, 3)}


def test_no_frozen_frozen_arrows():
    q = initial_quiver(5)
    for (u, v) in q.arrows():
        assert not (u in q.frozen and v in q.frozen)


def test_mutation_is_involution_on_q4():
    q = initial_quiver(4)
    for v in q.mutable:
        assert mutate_quiver(mutate_quiver(q, v), v) == q


def test_q3_mutation_reverses_the_star():
    q = initial_quiver(3)
    v = (2, 1)
    q2 = mutate_quiver(q, v)
    neighbours = {u for u in q.vertices if q.weight(u, v)}
    assert len(neighbours) == 4
    for u in neighbours:
        assert q2.weight(u, v) == -q.weight(u, v)
    assert {k: w for k, w in q2.arrows().items() if v not in k} == {k: w for k, w in q.arrows().items() if v not in k}


def test_three_cycle():
    a, b, c = "a", "b", "c"
    q = Quiver([a, b, c], [], {(a, b): 1, (b, c): 1, (c, a): 1})
    q2 = mutate_quiver(q, b)
    assert q2.weight(b, a) == 1
    assert q2.weight(c, b) == 1
    assert q2.weight(c, a) == 0
    assert q2.arrows() == {(b, a): 1, (c, b): 1}


def test_composable_path_adds_arrow():
    # u -> v -> w with no u-w arrow gains u -> w after mutating v
    q = Quiver(["u", "v", "w"], [], {("u", "v"): 2, ("v", "w"): 3})
    assert mutate_quiver(q, "v").weight("u", "w") == 6


def test_frozen_vertex_cannot_mutate():
    with pytest.raises(FrozenVertex):
        mutate_quiver(initial_quiver(4), (1, 1))


def test_initial_quiver_needs_n_at_least_3():
    with pytest.raises(ValueError):
        initial_quiver(2)


def test_matrix_oracle_on_three_cycle():
    b = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert matrix_mutation(b, 1) == [[0, -1, 0], [1, 0, -1], [0, 1, 0]]


def test_oracle_agreement_on_1000_random_quivers():
    rep = oracle_comparison(1000, rng_seed=11)
    assert rep.cases == 1000
    assert rep.mismatches == 0
    assert rep.involution_failures == 0
    assert rep.skew_failures == 0


def test_random_walks_on_grid_quivers_match_oracle():
    rng = random.Random(8)
    for n in (3, 4, 5, 6):
        q = initial_quiver(n)
        b = quiver_matrix(q)
        for _ in range(40):
            v = rng.choice(q.mutable)
            k = q.vertices.index(v)
            q, b = mutate_quiver(q, v), matrix_mutation(b, k)
            for i, x in enumerate(q.vertices):
                for j, y in enumerate(q.vertices):
                    if not (x in q.frozen and y in q.frozen):
                        assert q.weight(x, y) == b[i][j]


def test_relabel_and_equality():
    q = random_quiver(random.Random(0))
    mapping = {v: f"v{v}" for v in q.vertices}
    r = q.relabel(mapping)
    assert r != q
    assert r.relabel({w: v for v, w in mapping.items()}) == q


def test_json_and_dot():
    q = initial_quiver(3)
    doc = q.to_json()
    json.dumps(doc)
    assert sum(1 for v in doc["vertices"] if not v["frozen"]) == 1
    dot = q.to_dot()
    assert dot.startswith("digraph")
