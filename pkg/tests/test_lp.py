import itertools
import random
from fractions import Fraction as F

from conreach import lp
from conreach.exactla import RatMatrix, rank, solve


def brute_force_max(obj, rows, rhs):
    """Vertex-enumeration oracle for bounded feasible programs."""
    dim = len(obj)
    best = None
    for subset in itertools.combinations(range(len(rows)), dim):
        m = RatMatrix([rows[i] for i in subset])
        if rank(m) < dim:
            continue
        point = solve(m, [rhs[i] for i in subset])
        if point is None:
            continue
        if all(sum(r * x for r, x in zip(row, point)) <= b
               for row, b in zip(rows, rhs)):
            value = sum(c * x for c, x in zip(obj, point))
            if best is None or value > best:
                best = value
    return best


def test_simple_box():
    res = lp.solve_lp([F(1)], [[F(1)], [F(-1)]], [F(2), F(3)])
    assert res.status == lp.OPTIMAL
    assert res.value == 2 and res.point == (F(2),)


def test_minimize():
    res = lp.solve_lp([F(1)], [[F(1)], [F(-1)]], [F(2), F(3)], maximize=False)
    assert res.status == lp.OPTIMAL and res.value == -3


def test_equality_constraint():
    res = lp.solve_lp([F(1), F(0)], [[F(1), F(0)], [F(-1), F(0)]], [F(5), F(5)],
                      [[F(1), F(-1)]], [F(0)])
    assert res.status == lp.OPTIMAL and res.value == 5
    assert res.point[0] == res.point[1]


def test_infeasible():
    res = lp.solve_lp([F(1)], [[F(1)], [F(-1)]], [F(-1), F(-1)])
    assert res.status == lp.INFEASIBLE


def test_unbounded():
    res = lp.solve_lp([F(1)], [[F(-1)]], [F(0)])
    assert res.status == lp.UNBOUNDED


def test_degenerate_no_cycling():
    # multiple constraints active at the optimum; Bland's rule must terminate
    rows = [[F(1), F(1)], [F(1), F(0)], [F(0), F(1)], [F(-1), F(0)], [F(0), F(-1)]]
    rhs = [F(1), F(1), F(1), F(0), F(0)]
    res = lp.solve_lp([F(1), F(1)], rows, rhs)
    assert res.status == lp.OPTIMAL and res.value == 1


def test_random_against_vertex_enumeration():
    rng = random.Random(77)
    checked = 0
    while checked < 30:
        dim = rng.randint(1, 3)
        rows = [[F(rng.randint(-3, 3)) for _ in range(dim)]
                for _ in range(rng.randint(dim + 1, 2 * dim + 3))]
        # bounding box keeps the oracle's enumeration finite
        for i in range(dim):
            unit = [F(0)] * dim
            unit[i] = F(1)
            rows.append(list(unit))
            rows.append([-x for x in unit])
        rhs = [F(rng.randint(0, 4)) for _ in rows]
        obj = [F(rng.randint(-3, 3)) for _ in range(dim)]
        res = lp.solve_lp(obj, rows, rhs)
        oracle = brute_force_max(obj, rows, rhs)
        if oracle is None:
            assert res.status == lp.INFEASIBLE
        else:
            assert res.status == lp.OPTIMAL
            assert res.value == oracle
        checked += 1
