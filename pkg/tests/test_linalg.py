import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from detlab.constructions import CYCLIC_C, FANO
from detlab.errors import DimensionError, DomainError
from detlab.linalg import (
    BoundValue,
    ExponentPoint,
    RyserParams,
    bareiss_det,
    batch_bareiss_det,
    column_diff_transform,
    det_exact,
    gram_determinant,
    hadamard_row_bound,
    maximize_exponent_grid,
    prefix_sum_columns,
    prop01_bound,
    row_gram,
    ryser_bound,
    sparse_bound_constant,
    sparse_bound_exponent,
    to_pm_one,
    two_n_ones_bound,
)
from detlab.matrix import ExactMatrix

from oracles import gram_by_hand, leibniz_det


def test_det_of_cycle_block():
    assert det_exact(CYCLIC_C) == 2


def test_det_identity():
    assert det_exact(ExactMatrix.identity(5)) == 1


def test_det_fano():
    assert abs(det_exact(FANO)) == 24


def test_det_non_square():
    with pytest.raises(DimensionError):
        det_exact(ExactMatrix([[1, 2, 3]]))


def test_det_rational_input():
    M = ExactMatrix([["1/2", 1], [0, "2/3"]])
    assert det_exact(M) == Fraction(1, 3)
    assert det_exact(ExactMatrix([["1/2", 0], [0, 2]])) == 1


@settings(max_examples=150)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_leibniz(rows):
    assert bareiss_det([r[:] for r in rows]) == leibniz_det(rows)


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_rational_det_matches_leibniz(rows):
    assert det_exact(ExactMatrix(rows)) == leibniz_det(rows)


def test_batch_bareiss_matches_scalar():
    rng = random.Random(3)
    for m in range(1, 7):
        stack = [[[rng.choice([0, 0, 1, -1, 2]) for _ in range(m)] for _ in range(m)] for _ in range(200)]
        assert batch_bareiss_det(stack) == [bareiss_det([r[:] for r in M]) for M in stack]


def test_batch_bareiss_refuses_huge_entries():
    with pytest.raises(DomainError):
        batch_bareiss_det([[[2**40, 0], [0, 2**40]]])


def test_row_gram_examples():
    assert row_gram(ExactMatrix([[1, 1]])).rows == ((2,),)
    star = ExactMatrix([[1, 1, 0], [1, 0, 1]])
    assert row_gram(star).rows == ((2, 1), (1, 2))
    assert gram_determinant(star) == 3
    tri = ExactMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert gram_determinant(tri) == 4


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_row_gram_matches_hand_computation(rows):
    G = row_gram(ExactMatrix(rows))
    assert [list(r) for r in G.rows] == gram_by_hand(rows)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_gram_det_is_det_squared(rows):
    M = ExactMatrix(rows)
    assert gram_determinant(M) == det_exact(M) ** 2


def test_hadamard_examples():
    assert hadamard_row_bound(ExactMatrix.identity(4)).value == 1
    assert hadamard_row_bound(ExactMatrix([[1, 1], [1, 1]])).value == pytest.approx(2)
    h = hadamard_row_bound(CYCLIC_C).value
    assert h == pytest.approx(2 ** 1.5)
    assert h >= 2


def test_hadamard_dominates_random():
    rng = random.Random(0)
    for _ in range(1000):
        n = rng.randint(1, 8)
        M = ExactMatrix([[rng.choice((-1, 0, 1)) for _ in range(n)] for _ in range(n)])
        assert hadamard_row_bound(M).admits(abs(det_exact(M)))


def test_bound_value_rejects_negative():
    with pytest.raises(DomainError):
        BoundValue(-1.0, "x")


def test_ryser_examples():
    assert ryser_bound(RyserParams(7, 3)).value == pytest.approx(24)
    assert ryser_bound(RyserParams(2, 1)).value == pytest.approx(1)
    p = RyserParams(5, 2)
    assert p.lam == Fraction(1, 2)
    assert ryser_bound(p).value == pytest.approx(4.5)


@pytest.mark.parametrize("n,k", [(1, 1), (5, 4), (5, 0)])
def test_ryser_range(n, k):
    with pytest.raises(DomainError):
        RyserParams(n, k)


def test_prop01_examples():
    assert prop01_bound(4, 16).value == pytest.approx(16)
    assert prop01_bound(4, 8).value == pytest.approx(4)
    assert prop01_bound(3, 3).value == pytest.approx(1)
    with pytest.raises(DomainError):
        prop01_bound(0, 1)


@pytest.mark.parametrize("rows,want", [([[1]], 2), ([[1, 0], [0, 1]], 4), ([[0, 0], [0, 0]], 0)])
def test_to_pm_one_examples(rows, want):
    B = to_pm_one(ExactMatrix(rows))
    assert det_exact(B) == want
    assert all(v in (-1, 1) for r in B.rows for v in r)


def test_to_pm_one_scales_det():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(1, 5)
        A = ExactMatrix([[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
        assert det_exact(to_pm_one(A)) == 2**n * det_exact(A)


def test_to_pm_one_rejects_non_binary():
    with pytest.raises(DomainError):
        to_pm_one(ExactMatrix([[2]]))


def test_column_diff_on_staircase():
    A = ExactMatrix([[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    B = column_diff_transform(A)
    assert all(sum(1 for v in r if v) <= 2 for r in B.rows)
    assert det_exact(B) == det_exact(A)
    I = column_diff_transform(ExactMatrix.identity(3))
    assert all(v in (-1, 0, 1) for r in I.rows for v in r)
    assert det_exact(I) == 1


def test_prefix_sum_identity():
    C = prefix_sum_columns(ExactMatrix.identity(3))
    assert C.rows == ((1, 1, 1), (0, 1, 1), (0, 0, 1))
    assert det_exact(C) == 1


def test_transforms_are_inverse_and_keep_det():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 6)
        A = ExactMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        assert prefix_sum_columns(column_diff_transform(A)) == A
        assert column_diff_transform(prefix_sum_columns(A)) == A
        assert det_exact(column_diff_transform(A)) == det_exact(A)
        assert det_exact(prefix_sum_columns(A)) == det_exact(A)


def test_exponent_examples():
    target = 1 / 3 + math.log(3) / (3 * math.log(2))
    third = Fraction(1, 3)
    assert sparse_bound_exponent(ExponentPoint(third, third)) == pytest.approx(target, abs=1e-12)
    assert sparse_bound_exponent(ExponentPoint(0, 0)) == pytest.approx(2 / 3)
    assert sparse_bound_exponent(ExponentPoint(1, 1)) == pytest.approx(-1 + math.log(3) / math.log(2))


def test_exponent_domain():
    with pytest.raises(DomainError):
        ExponentPoint(Fraction(1, 4), Fraction(1, 2))
    with pytest.raises(DomainError):
        ExponentPoint(2, 0)


def test_exponent_branches_agree_on_boundary():
    # at x + 2y = 1 both branches coincide
    for y in (Fraction(1, 10), Fraction(1, 5), Fraction(1, 4)):
        x = 1 - 2 * y
        p = ExponentPoint(x, y)
        first = float(1 - x - y)
        second = float((2 - 2 * x - y) / 3)
        assert first == pytest.approx(second)
        assert sparse_bound_exponent(p) >= min(first, second)


def test_grid_maximum():
    f, x, y = maximize_exponent_grid(1e-2)
    assert 0.855 <= f <= 0.8617
    assert abs(x - 1 / 3) <= 0.02 and abs(y - 1 / 3) <= 0.02


def test_bound_constant_and_two_n_ones():
    target = 1 / 3 + math.log(3) / (3 * math.log(2))
    assert sparse_bound_constant(target) == pytest.approx((2 * 3) ** (1 / 6))
    assert two_n_ones_bound(6).value == pytest.approx(6)
