import itertools
from math import gcd

import pytest
from hypothesis import given, strategies as st

from topogs.intmat import (
    IntegerMatrix,
    SnfError,
    invariant_factors,
    rank,
    smith_normal_form,
    verify_snf,
)


def dense(rows, cols, lo=-6, hi=6):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def small_matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(lambda c: dense(r, c)))


def minor_gcds(A):
    """Determinantal divisors d_k = gcd of all k x k minors (independent oracle)."""
    r, c = len(A), len(A[0])
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                sub = IntegerMatrix.from_dense([[A[i][j] for j in cols] for i in rows])
                g = gcd(g, sub.determinant())
        if g == 0:
            break
        out.append(g)
    return out


def factors_from_divisors(ds):
    prev, out = 1, []
    for d in ds:
        out.append(d // prev)
        prev = d
    return out


def test_diag_2_3():
    res = smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 3]]))
    assert res.diagonal == [1, 6]
    assert res.S.to_dense() == [[1, 0], [0, 6]]
    verify_snf(IntegerMatrix.from_dense([[2, 0], [0, 3]]), res)


def test_zero_matrix():
    M = IntegerMatrix.zeros(3, 4)
    res = smith_normal_form(M)
    assert res.diagonal == [] and res.S.is_zero()
    assert res.U == IntegerMatrix.identity(3) and res.V == IntegerMatrix.identity(4)
    verify_snf(M, res)


def test_empty_shapes():
    for r, c in [(0, 3), (3, 0), (0, 0)]:
        res = smith_normal_form(IntegerMatrix.zeros(r, c))
        assert res.rank == 0


def test_determinant():
    assert IntegerMatrix.from_dense([[2, 1], [7, 4]]).determinant() == 1
    assert IntegerMatrix.from_dense([[0, 1, 2], [3, 4, 5], [6, 7, 8]]).determinant() == 0
    assert IntegerMatrix.from_dense([[0, 2], [3, 0]]).determinant() == -6


def test_matmul_and_transpose():
    A = IntegerMatrix.from_dense([[1, 2, 0], [0, -1, 3]])
    B = IntegerMatrix.from_dense([[1, 0], [2, 1], [0, 4]])
    assert (A @ B).to_dense() == [[5, 2], [-2, 11]]
    assert A.transpose().to_dense() == [[1, 0], [2, -1], [0, 3]]
    with pytest.raises(ValueError):
        A @ A


@given(dense(6, 6, -20, 20))
def test_random_6x6(A):
    M = IntegerMatrix.from_dense(A)
    res = smith_normal_form(M)
    verify_snf(M, res)
    assert abs(res.U.determinant()) == 1 and abs(res.V.determinant()) == 1
    assert (res.U @ M @ res.V) == res.S


@given(small_matrices(4))
def test_invariant_factors_match_minors(A):
    M = IntegerMatrix.from_dense(A)
    assert invariant_factors(M) == factors_from_divisors(minor_gcds(A))


@given(small_matrices(5))
def test_divisibility_and_positivity(A):
    d = invariant_factors(IntegerMatrix.from_dense(A))
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


@given(small_matrices(5), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_replay_inverses(A, v):
    M = IntegerMatrix.from_dense(A)
    res = smith_normal_form(M)
    r, c = M.shape
    x = {i: v[i] for i in range(r) if v[i]}
    y = {i: v[i] for i in range(c) if v[i]}
    assert res.apply_U_inv(res.apply_U(x)) == x
    assert res.apply_V_inv(res.apply_V(y)) == y
    assert res.U_inv.transpose().apply(x) == res.apply_U_inv_T(x)


@given(small_matrices(5))
def test_one_sided_tracking_verifies(A):
    M = IntegerMatrix.from_dense(A)
    for rows, cols in [(True, False), (False, True)]:
        res = smith_normal_form(M, track_rows=rows, track_cols=cols)
        verify_snf(M, res)
        assert res.diagonal == invariant_factors(M)


def test_untracked_side_refuses():
    res = smith_normal_form(IntegerMatrix.from_dense([[2, 4], [6, 8]]), track_rows=False)
    with pytest.raises(ValueError, match="not tracked"):
        res.apply_U({0: 1})


def test_verify_catches_corruption():
    M = IntegerMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    res = smith_normal_form(M)
    assert res.diagonal == [2, 6, 12]
    res.diagonal[1] = 7
    with pytest.raises(SnfError):
        verify_snf(M, res)


def test_rank():
    assert rank(IntegerMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(IntegerMatrix.identity(4)) == 4
