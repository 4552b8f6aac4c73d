import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy.optimize import linprog

from clusterfan.errors import SingularGenerators
from clusterfan.linalg import det, integer_inverse, inverse, mat_vec
from clusterfan.lp import find_feasible


def _rand_matrix(rng, size, lo=-3, hi=3):
    return [[rng.randint(lo, hi) for _ in range(size)] for _ in range(size)]


def test_det_matches_sympy():
    rng = random.Random(0)
    for _ in range(200):
        m = _rand_matrix(rng, rng.randint(1, 6))
        assert det(m) == sympy.Matrix(m).det()


def test_inverse_matches_sympy():
    rng = random.Random(1)
    done = 0
    while done < 50:
        m = _rand_matrix(rng, rng.randint(1, 5))
        if det(m) == 0:
            with pytest.raises(SingularGenerators):
                inverse(m)
            continue
        inv = inverse(m)
        assert sympy.Matrix(inv) == sympy.Matrix(m).inv()
        done += 1


def test_integer_inverse_of_unimodular():
    m = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    inv = integer_inverse(m)
    assert inv == [[1, -1, 1], [0, 1, -1], [0, 0, 1]]
    with pytest.raises(ValueError):
        integer_inverse([[2, 0], [0, 1]])


def test_lp_simple_cases():
    # x + y = 1, x - y >= 1/2
    x = find_feasible([[1, 1]], [1], [[1, -1]], [Fraction(1, 2)])
    assert x is not None and x[0] + x[1] == 1 and x[0] - x[1] >= Fraction(1, 2)
    # x + y = -1 has no nonnegative solution
    assert find_feasible([[1, 1]], [-1]) is None
    # x - y >= 1 and y - x >= 1 contradict
    assert find_feasible(a_ge=[[1, -1], [-1, 1]], b_ge=[1, 1]) is None
    assert find_feasible(a_ge=[], b_ge=[], nvars=3) == [0, 0, 0]


def test_lp_agrees_with_float_solver_on_random_systems():
    rng = random.Random(2)
    checked = 0
    for _ in range(300):
        nv = rng.randint(2, 5)
        me, mg = rng.randint(0, 3), rng.randint(0, 3)
        a_eq = [[rng.randint(-3, 3) for _ in range(nv)] for _ in range(me)]
        b_eq = [rng.randint(-3, 3) for _ in range(me)]
        a_ge = [[rng.randint(-3, 3) for _ in range(nv)] for _ in range(mg)]
        b_ge = [rng.randint(-3, 3) for _ in range(mg)]
        if not a_eq and not a_ge:
            continue
        x = find_feasible(a_eq, b_eq, a_ge, b_ge, nvars=nv)
        ref = linprog(np.zeros(nv),
                      A_ub=-np.array(a_ge) if a_ge else None, b_ub=-np.array(b_ge) if a_ge else None,
                      A_eq=np.array(a_eq) if a_eq else None, b_eq=np.array(b_eq) if a_eq else None,
                      bounds=[(0, None)] * nv, method="highs")
        assert (x is not None) == (ref.status == 0)
        if x is not None:
            assert all(v >= 0 for v in x)
            assert mat_vec(a_eq, x) == list(b_eq)
            assert all(lhs >= b for lhs, b in zip(mat_vec(a_ge, x), b_ge))
        checked += 1
    assert checked > 250
