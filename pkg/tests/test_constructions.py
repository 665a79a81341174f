import pytest

from detlab import constructions as cons
from detlab.cop import has_kcop
from detlab.errors import DomainError
from detlab.linalg import column_diff_transform, det_exact, prefix_sum_columns
from detlab.matrix import ExactMatrix

from oracles import leibniz_det


@pytest.mark.parametrize("n,want", [(3, 2), (6, 4), (9, 8)])
def test_cyclic_blocks(n, want):
    res = cons.cyclic_block_matrix(n)
    assert res.predicted_abs_det == want
    assert res.matrix.count_nonzero() == 2 * n
    assert res.matrix.is_01()
    assert all(sum(r) <= 2 for r in res.matrix.rows)


def test_cyclic_rejects_bad_n():
    with pytest.raises(DomainError):
        cons.cyclic_block_matrix(4)


def test_fano_incidence():
    F = cons.FANO
    # seven lines, three points each, two lines meet in one point
    assert all(sum(r) == 3 for r in F.rows)
    for i in range(7):
        for j in range(i + 1, 7):
            assert sum(a * b for a, b in zip(F.row(i), F.row(j))) == 1
    assert abs(leibniz_det([list(r) for r in F.rows])) == 24


@pytest.mark.parametrize("n,want", [(7, 24), (14, 576)])
def test_fano_blocks(n, want):
    res = cons.fano_block_matrix(n)
    assert res.predicted_abs_det == want
    assert res.matrix.count_nonzero() == 3 * n


@pytest.mark.parametrize("k", [1, 2, 4, 8])
def test_sylvester(k):
    H = cons.sylvester_hadamard(k)
    assert H @ H.T == ExactMatrix.identity(k).scale(k)
    assert all(r[0] == 1 for r in H.rows)
    assert abs(det_exact(H)) ** 2 == k**k


def test_sylvester_rejects_non_power():
    with pytest.raises(DomainError):
        cons.sylvester_hadamard(3)


def test_filler_examples():
    assert cons.interleave_filler(cons.sylvester_hadamard(1)).rows == ((0,),)
    H = ExactMatrix([[1, 1], [1, -1]])
    assert cons.interleave_filler(H).rows == ((-1, 0), (0, 0))


@pytest.mark.parametrize("k", [1, 2, 4, 8, 16])
def test_filler_rule_and_alternation(k):
    H = cons.sylvester_hadamard(k)
    R = cons.interleave_filler(H)
    for r in range(k):
        assert R[r, k - 1] == 0
        for i in range(k - 1):
            want = -H[r, i] if H[r, i] == H[r, i + 1] else 0
            assert R[r, i] == want
    for row in cons.interleave_rows(H, R):
        nz = [v for v in row if v]
        assert len(nz) <= 2 * k
        assert nz[0] == 1
        assert all(a == -b for a, b in zip(nz, nz[1:]))


def test_alternating_profile_helper():
    assert cons.alternating_profile_ok((0, 1, 0, -1, 1))
    assert not cons.alternating_profile_ok((-1, 1))
    assert not cons.alternating_profile_ok((1, 1))
    assert not cons.alternating_profile_ok((1, -1, 1), k=1)


@pytest.mark.parametrize("k,p,want", [(2, 2, 2), (2, 3, 4), (2, 4, 8), (4, 2, 16), (4, 3, 256), (8, 2, 4096)])
def test_kcop_construct(k, p, want):
    res = cons.kcop_construct(k, p)
    C = res.matrix
    assert C.shape == (k * p, k * p)
    assert res.predicted_abs_det == want == abs(det_exact(C))
    assert C.is_01() and has_kcop(C, k)
    assert prefix_sum_columns(column_diff_transform(C)) == C


def test_kcop_intermediate_properties():
    B = cons.kcop_intermediate(4, 3)
    assert all(cons.alternating_profile_ok(r, 4) for r in B.rows)
    assert prefix_sum_columns(B) == cons.kcop_construct(4, 3).matrix


def test_residue_interleave_order():
    assert cons.residue_interleave_order(2, 3) == [0, 2, 4, 1, 3, 5]


@pytest.mark.parametrize("k,p", [(3, 2), (32, 2), (2, 1)])
def test_kcop_rejects(k, p):
    with pytest.raises(DomainError):
        cons.kcop_construct(k, p)


def test_two_cop_h_and_r():
    assert abs(det_exact(cons.TWO_COP_H)) == 4
    assert cons.TWO_COP_H.col(0) == (1, 1, 1)


@pytest.mark.parametrize("p,want", [(2, 4), (3, 16), (4, 64)])
def test_two_cop_construct(p, want):
    res = cons.two_cop_construct(p)
    assert res.predicted_abs_det == want == abs(det_exact(res.matrix))
    assert res.matrix.is_01() and has_kcop(res.matrix, 2)


@pytest.mark.parametrize("n,t,want", [(4, 8, 4), (2, 4, 2), (8, 32, 256), (3, 3, 1)])
def test_prop01_extremal(n, t, want):
    res = cons.prop01_extremal(n, t)
    assert res.predicted_abs_det == want
    assert res.matrix.count_nonzero() == t


@pytest.mark.parametrize("n,t", [(4, 6), (6, 24), (3, 9)])
def test_prop01_rejects(n, t):
    with pytest.raises(DomainError):
        cons.prop01_extremal(n, t)


def test_result_checks_prediction():
    from detlab.errors import InvariantViolation

    with pytest.raises(InvariantViolation):
        cons.ConstructionResult(ExactMatrix.identity(2), 3)
