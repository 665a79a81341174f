import itertools
import random
from fractions import Fraction

from detlab.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


def brute_lp_2d(c, A, b):
    """Minimum of c.x over {A x <= b, x >= 0} in two variables by vertex enumeration.

    Returns (status, value); unboundedness is detected by probing a far point
    along each feasible ray direction, good enough for small integer data.
    """
    rows = [list(map(Fraction, r)) for r in A] + [[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(-1)]]
    rhs = [Fraction(v) for v in b] + [Fraction(0), Fraction(0)]

    def feasible(x):
        return all(r[0] * x[0] + r[1] * x[1] <= h for r, h in zip(rows, rhs))

    best = None
    for (r1, h1), (r2, h2) in itertools.combinations(zip(rows, rhs), 2):
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0:
            continue
        x = ((h1 * r2[1] - r1[1] * h2) / det, (r1[0] * h2 - h1 * r2[0]) / det)
        if feasible(x):
            v = c[0] * x[0] + c[1] * x[1]
            best = v if best is None else min(best, v)
    if best is None:
        return INFEASIBLE, None
    for d in [(1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, 3), (3, 1)]:
        far = (Fraction(10**6 * d[0]), Fraction(10**6 * d[1]))
        if feasible(far) and c[0] * d[0] + c[1] * d[1] < 0:
            return UNBOUNDED, None
    return OPTIMAL, best


def test_simple_optimum():
    # min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
    res = solve_lp([-1, -1], [[1, 2], [3, 1]], [4, 6])
    assert res.status == OPTIMAL
    assert res.x == (Fraction(8, 5), Fraction(6, 5))
    assert res.value == Fraction(-14, 5)


def test_negative_rhs_needs_phase_one():
    # x + y >= 2 written as -x - y <= -2; min x + 2y
    res = solve_lp([1, 2], [[-1, -1]], [-2])
    assert res.status == OPTIMAL and res.value == 2


def test_infeasible():
    res = solve_lp([0, 0], [[1, 1], [-1, -1]], [1, -3])
    assert res.status == INFEASIBLE


def test_unbounded():
    res = solve_lp([-1, 0], [[-1, 1]], [1])
    assert res.status == UNBOUNDED


def test_degenerate_does_not_cycle():
    # classic degenerate example; Bland's rule must terminate
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == OPTIMAL
    assert res.value == Fraction(-1, 20)


def test_random_against_vertex_enumeration():
    rng = random.Random(9)
    for _ in range(300):
        m = rng.randint(1, 4)
        A = [[rng.randint(-3, 3), rng.randint(-3, 3)] for _ in range(m)]
        b = [rng.randint(-4, 6) for _ in range(m)]
        c = [rng.randint(-3, 3), rng.randint(-3, 3)]
        res = solve_lp(c, A, b)
        status, value = brute_lp_2d(c, A, b)
        if status == INFEASIBLE:
            assert res.status == INFEASIBLE
        elif res.status == OPTIMAL:
            assert status == OPTIMAL and res.value == value
            assert all(sum(a * x for a, x in zip(r, res.x)) <= h for r, h in zip(A, b))
            assert all(x >= 0 for x in res.x)
        else:
            assert res.status == UNBOUNDED
