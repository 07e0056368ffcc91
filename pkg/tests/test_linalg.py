from fractions import Fraction

from hypothesis import given, strategies as st

from ietlab.linalg import (integral_row_basis, matvec, nullspace, primitive, rank, rref, same_span,
                           solve)

small = st.integers(min_value=-4, max_value=4)
matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=5))


@given(matrices)
def test_rank_nullity(m):
    assert rank(m) + len(nullspace(m)) == len(m[0])


@given(matrices)
def test_nullspace_vectors_are_killed(m):
    for v in nullspace(m):
        assert not any(matvec(m, v))


@given(matrices, st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(m, x):
    x = x[:len(m[0])]
    rhs = matvec(m, x)
    sol = solve(m, rhs)
    assert sol is not None and matvec(m, sol) == rhs


def test_solve_inconsistent():
    assert solve([[1, 1], [2, 2]], [1, 3]) is None


def test_rref_pivots():
    rows, piv = rref([[0, 2, 4], [1, 1, 1]])
    assert piv == [0, 1]
    assert rows == [[1, 0, -1], [0, 1, 2]]


def test_primitive():
    assert primitive([Fraction(-1, 2), Fraction(1, 3)]) == [3, -2]
    assert primitive([0, 0]) == [0, 0]


@given(matrices)
def test_integral_basis_spans_same_space(m):
    basis = integral_row_basis(m)
    if basis:
        assert same_span(basis, m)
        assert all(all(isinstance(x, int) for x in row) for row in basis)
