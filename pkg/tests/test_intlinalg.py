import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netsheaf.intlinalg import (
    column_space_basis,
    det,
    diagonal,
    identity_matrix,
    integer_kernel,
    invariant_factors,
    is_smith_form,
    matmul,
    matvec,
    smith_normal_form,
    solve_integer_linear,
)
from oracles import det_fraction, rank_fraction


@pytest.mark.parametrize(
    "A, diag",
    [([[2, 4], [6, 8]], [2, 4]), (identity_matrix(3), [1, 1, 1]), ([[0]], [0]), ([[0, 0, 3]], [3])],
)
def test_snf_examples(A, diag):
    U, Dm, V = smith_normal_form(A)
    assert diagonal(Dm) == diag
    assert matmul(matmul(U, A), V) == Dm


def test_solve_examples():
    x = solve_integer_linear([[1, -1]], [3])
    assert matvec([[1, -1]], x) == [3]
    assert solve_integer_linear([[2]], [1]) is None
    assert solve_integer_linear([[0, 0], [0, 0]], [0, 0]) == [0, 0]
    with pytest.raises(ValueError):
        solve_integer_linear([[1]], [1, 2])


def test_invariant_factors_circle():
    # coboundary of C4 with constant Z: H^1 = coker
    A = [[-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1], [1, 0, 0, -1]]
    assert invariant_factors(A, 4, 4) == (1, [])
    assert invariant_factors([[2, 0], [0, 3]], 2, 2) == (0, [6])
    assert invariant_factors([], 0) == (0, [])


small = st.integers(min_value=-9, max_value=9)


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def square(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
    )


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_snf_properties(A):
    U, Dm, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == Dm
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    assert is_smith_form(Dm)
    assert sum(1 for d in diagonal(Dm) if d) == rank_fraction(A)


@settings(max_examples=200, deadline=None)
@given(square())
def test_det_matches_rational_elimination(A):
    assert det(A) == det_fraction(A)


@settings(max_examples=150, deadline=None)
@given(square(3))
def test_snf_product_is_abs_det(A):
    _, Dm, _ = smith_normal_form(A)
    p = 1
    for d in diagonal(Dm):
        p *= d
    assert p == abs(det(A))


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solve_planted(A, data):
    n = len(A[0])
    x0 = data.draw(st.lists(small, min_size=n, max_size=n))
    b = matvec(A, x0)
    x = solve_integer_linear(A, b)
    assert x is not None and matvec(A, x) == b


@settings(max_examples=200, deadline=None)
@given(matrices(3), st.data())
def test_solve_none_is_sound(A, data):
    b = data.draw(st.lists(small, min_size=len(A), max_size=len(A)))
    x = solve_integer_linear(A, b)
    if x is not None:
        assert matvec(A, x) == b
    else:
        # some row of the diagonalized system must be inconsistent
        U, Dm, _ = smith_normal_form(A)
        c = matvec(U, b)
        bad = False
        for i, ci in enumerate(c):
            d = Dm[i][i] if i < len(Dm[0]) else 0
            bad |= (d == 0 and ci != 0) or (d != 0 and ci % d != 0)
        assert bad


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_basis(A):
    K = integer_kernel(A)
    assert len(K) == len(A[0]) - rank_fraction(A)
    for v in K:
        assert matvec(A, v) == [0] * len(A)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_column_space_basis(A):
    B = column_space_basis(A)
    assert len(B) == rank_fraction(A)
    # every basis vector is an integer combination of the columns
    for v in B:
        assert solve_integer_linear(A, v) is not None
    # and every column is a combination of the basis
    if B:
        Bm = [[B[j][i] for j in range(len(B))] for i in range(len(A))]
        for j in range(len(A[0])):
            assert solve_integer_linear(Bm, [row[j] for row in A]) is not None
