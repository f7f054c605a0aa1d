from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from curvgraph.services.exact_simplex import solve_exact


def test_textbook_problem():
    # maximize 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18
    result = solve_exact([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert result.status == "optimal"
    assert result.objective == Fraction(-36)
    assert result.x == [Fraction(2), Fraction(6)]


def test_rational_optimum_is_exact():
    result = solve_exact([-1, -1], [[3, 1], [1, 3]], [1, 1])
    assert result.objective == Fraction(-1, 2)
    assert result.x == [Fraction(1, 4), Fraction(1, 4)]


def test_equality_and_negative_rhs():
    # x + y = 3, x - y <= -1 (so y >= x + 1), minimize x + 2y
    result = solve_exact([1, 2], [[1, -1]], [-1], [[1, 1]], [3])
    assert result.status == "optimal"
    assert result.objective == Fraction(5)
    assert result.x == [Fraction(1), Fraction(2)]


def test_infeasible_and_unbounded():
    assert solve_exact([1], [[1]], [-1]).status == "infeasible"
    assert solve_exact([-1], [[-1]], [0]).status == "unbounded"


def test_redundant_equalities_are_dropped():
    result = solve_exact([1, 1], [], [], [[1, 1], [2, 2]], [2, 4])
    assert result.status == "optimal"
    assert result.objective == Fraction(2)


def test_agrees_with_highs_on_random_programs(rng):
    for _ in range(25):
        n, k = 4, 6
        A = rng.integers(-3, 4, size=(k, n))
        b = rng.integers(1, 10, size=k)
        c = rng.integers(-5, 6, size=n)
        # a box keeps every program bounded
        A = np.vstack([A, np.eye(n, dtype=int)])
        b = np.concatenate([b, np.full(n, 5)])
        exact = solve_exact(c.tolist(), A.tolist(), b.tolist())
        reference = linprog(c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
        assert exact.status == "optimal"
        assert float(exact.objective) == pytest.approx(reference.fun, abs=1e-9)
