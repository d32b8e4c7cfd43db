import numpy as np
import pytest

from lfgeo import linprog
from lfgeo.rationals import Q, dot


def test_simple_maximization():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0
    res = linprog.solve([Q(1), Q(1)], A_ub=[[Q(1), Q(2)], [Q(3), Q(1)]],
                        b_ub=[Q(4), Q(6)], maximize=True, nonneg=True)
    assert res.status == linprog.OPTIMAL
    assert res.value == Q(14, 5)


def test_equality_constrained():
    # max x s.t. x + y = 1, x,y >= 0
    res = linprog.solve([Q(1), Q(0)], A_eq=[[Q(1), Q(1)]], b_eq=[Q(1)],
                        maximize=True, nonneg=True)
    assert res.status == linprog.OPTIMAL
    assert res.value == Q(1)


def test_unbounded():
    res = linprog.solve([Q(1)], maximize=True, nonneg=True)
    assert res.status == linprog.UNBOUNDED


def test_infeasible_with_farkas():
    # x >= 0, x <= -1 infeasible; Farkas y >= 0 with y.A >= 0, y.b < 0
    res = linprog.solve([Q(0)], A_ub=[[Q(1)]], b_ub=[Q(-1)],
                        maximize=True, nonneg=True)
    assert res.status == linprog.INFEASIBLE
    y = res.farkas
    assert all(v >= 0 for v in y)
    assert dot(y, [Q(-1)]) < 0


def test_free_variables():
    # max -x over free x with x >= -3 (i.e. -x <= 3)
    res = linprog.solve([Q(-1)], A_ub=[[Q(-1)]], b_ub=[Q(3)],
                        maximize=True, nonneg=False)
    assert res.status == linprog.OPTIMAL
    assert res.value == Q(3)
    assert res.x[0] == Q(-3)


@pytest.mark.parametrize("seed", range(10))
def test_random_lp_matches_vertex_enumeration(seed):
    """Exact optimum over a random bounded 2D region equals the best
    feasible vertex of the constraint arrangement."""
    rng = np.random.default_rng(seed)
    A = [[Q(int(rng.integers(-5, 6))), Q(int(rng.integers(-5, 6)))]
         for _ in range(4)]
    A += [[Q(1), Q(0)], [Q(0), Q(1)]]  # x <= 3, y <= 3 keeps it bounded
    b = [Q(int(rng.integers(1, 8))) for _ in range(4)] + [Q(3), Q(3)]
    c = [Q(int(rng.integers(-4, 5))), Q(int(rng.integers(-4, 5)))]
    res = linprog.solve(c, A_ub=A, b_ub=b, maximize=True, nonneg=True)
    assert res.status == linprog.OPTIMAL

    best = None
    rows = A + [[Q(-1), Q(0)], [Q(0), Q(-1)]]
    rhs = b + [Q(0), Q(0)]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]
            if det == 0:
                continue
            x = (rhs[i] * rows[j][1] - rows[i][1] * rhs[j]) / det
            y = (rows[i][0] * rhs[j] - rhs[i] * rows[j][0]) / det
            if all(r[0] * x + r[1] * y <= rb for r, rb in zip(rows, rhs)):
                val = c[0] * x + c[1] * y
                best = val if best is None else max(best, val)
    assert best == res.value
