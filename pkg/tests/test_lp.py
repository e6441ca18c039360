from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import float_support
from setid import lp
from setid.exceptions import InfeasibleError, UnboundedError
from setid.polytope import HalfspaceSystem


def test_simple_maximum():
    # max x + y  s.t. x <= 2, y <= 3, x + y <= 4, x, y >= 0
    sol = lp.maximize([1, 1], [[1, 0], [0, 1], [1, 1], [-1, 0], [0, -1]], [2, 3, 4, 0, 0])
    assert sol.value == 4
    assert sum(sol.x) == 4


def test_free_variables_and_equalities():
    # max -x  s.t. x + y == 1, y <= 5, x free  ->  x = -4
    sol = lp.maximize([-1, 0], [[0, 1]], [5], [[1, 1]], [1])
    assert sol.x == (Fraction(-4), Fraction(5))
    assert sol.value == 4


def test_negative_rhs_needs_phase_one():
    # x >= 2 written as -x <= -2
    sol = lp.maximize([-1], [[-1], [1]], [-2, 10])
    assert sol.x == (Fraction(2),)


def test_infeasible():
    with pytest.raises(InfeasibleError):
        lp.maximize([1], [[1], [-1]], [1, -2])


def test_inconsistent_equalities():
    with pytest.raises(InfeasibleError):
        lp.maximize([0, 0], A_eq=[[1, 1], [1, 1]], b_eq=[1, 2])


def test_redundant_equalities_are_fine():
    sol = lp.maximize([1, 0], [[-1, 0], [0, -1]], [0, 0], [[1, 1], [2, 2]], [1, 2])
    assert sol.value == 1


def test_unbounded():
    with pytest.raises(UnboundedError):
        lp.maximize([1, 0], [[0, 1]], [1])


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under the textbook largest-coefficient rule
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9],
         [Fraction(1, 2), -90, Fraction(-1, 50), 3],
         [0, 0, 1, 0]]
    b = [0, 0, 1]
    nonneg = [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    sol = lp.maximize(c, A + nonneg, b + [0] * 4)
    assert sol.value == Fraction(1, 20)


def test_feasible_point():
    assert lp.feasible_point([[1], [-1]], [1, -2]) is None
    x = lp.feasible_point([[1, 1]], [1], n=2)
    assert x[0] + x[1] <= 1


small = st.integers(-5, 5)


@given(st.lists(st.tuples(small, small, st.integers(0, 8)), min_size=1, max_size=5), small, small)
def test_matches_floating_point_reference(rows, c0, c1):
    # box keeps everything bounded and the origin keeps it feasible
    ineq = [((a, b), r) for a, b, r in rows] + [((1, 0), 4), ((-1, 0), 4), ((0, 1), 4), ((0, -1), 4)]
    sys_ = HalfspaceSystem(2, inequalities=ineq)
    exact = lp.maximize([c0, c1], [a for a, _ in ineq], [b for _, b in ineq])
    ref = float_support(sys_, (c0, c1))
    assert ref.status == 0
    assert abs(float(exact.value) - (-ref.fun)) < 1e-7
    assert all(a[0] * exact.x[0] + a[1] * exact.x[1] <= b for a, b in ineq)
