"""
Tests for exact rational linear algebra.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.exceptions import NumericRangeError, ParseError, UsageError
from app.utils.exactlin import (
    Mat,
    cayley_transform,
    column_space,
    format_scalar,
    inertia,
    intersection,
    inverse,
    nullspace,
    rank,
    same_span,
    solve,
    to_float,
    to_scalar,
)

small = st.integers(min_value=-4, max_value=4)


def square(n: int):
    return st.lists(small, min_size=n * n, max_size=n * n).map(lambda v: Mat(n, n, v))


def test_scalars_parse_and_format():
    """Test rational literal round trip."""
    assert to_scalar("3/6") == Fraction(1, 2)
    assert format_scalar(Fraction(-4, 2)) == "-2"
    assert format_scalar(Fraction(2, 3)) == "2/3"
    with pytest.raises(ParseError):
        to_scalar("1/0")
    with pytest.raises(UsageError):
        to_scalar(0.5)


def test_matrix_shape_is_checked():
    """Test matrix construction rejects wrong entry counts."""
    with pytest.raises(UsageError):
        Mat(2, 2, [1, 2, 3])


def test_matrix_is_immutable():
    """Test matrices cannot be changed after construction."""
    M = Mat.identity(2)
    with pytest.raises(AttributeError):
        M.rows = 3


def test_rank_and_nullspace():
    """Test rank-nullity on a singular matrix."""
    A = Mat.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(A) == 2
    kernel = nullspace(A)
    assert len(kernel) == 1
    assert (A @ kernel[0]).is_zero()


def test_solve_consistent_and_inconsistent():
    """Test solve returns a solution or None."""
    A = Mat.from_rows([[1, 1], [1, -1]])
    x = solve(A, Mat.column([3, 1]))
    assert x == Mat.column([2, 1])
    assert solve(Mat.from_rows([[1, 1], [2, 2]]), Mat.column([1, 3])) is None


def test_inverse_of_singular_raises():
    """Test inverting a singular matrix."""
    with pytest.raises(UsageError):
        inverse(Mat.from_rows([[1, 2], [2, 4]]))


def test_span_operations():
    """Test column space, span equality and intersection."""
    U = Mat.from_columns([[1, 0, 0], [0, 1, 0]], 3)
    V = Mat.from_columns([[1, 1, 0], [1, -1, 0], [2, 0, 0]], 3)
    assert column_space(V).cols == 2
    assert same_span(U, V)
    W = Mat.from_columns([[0, 1, 1]], 3)
    assert intersection(U, W).cols == 0
    assert intersection(U, Mat.from_columns([[0, 1, 1], [0, 0, 1]], 3)).cols == 1


def test_inertia_of_split_form():
    """Test inertia of a hyperbolic plane plus a definite line."""
    G = Mat.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, -2]])
    assert inertia(G) == (2, 0, 1)
    assert inertia(Mat.diag([1, 0, 3])) == (0, 1, 2)


def test_cayley_transform_is_orthogonal():
    """Test the Cayley transform of an antisymmetric matrix."""
    K = Mat.from_rows([[0, 1], [-1, 0]])
    Q = cayley_transform(K)
    assert Q.T @ Q == Mat.identity(2)


def test_to_float_range():
    """Test the float boundary rejects huge entries."""
    huge = Mat(1, 1, [Fraction(10) ** 400])
    with pytest.raises(NumericRangeError):
        to_float(huge, "test")
    assert to_float(Mat.diag([1, Fraction(1, 4)]), "test")[1, 1] == 0.25


@given(square(3))
def test_rank_nullity(A):
    """Test rank plus nullity equals the column count."""
    assert rank(A) + len(nullspace(A)) == 3


@given(square(3))
def test_inverse_when_invertible(A):
    """Test A @ inverse(A) is the identity for invertible A."""
    if rank(A) == 3:
        assert A @ inverse(A) == Mat.identity(3)


@given(square(3))
def test_inertia_counts_sum(A):
    """Test inertia of a symmetrized matrix covers every dimension."""
    S = A + A.T
    neg, zero, pos = inertia(S)
    assert neg + zero + pos == 3
    assert zero == 3 - rank(S)
