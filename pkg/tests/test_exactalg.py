from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetinv.exactalg import (ExactMatrix, QuadExt, det, det_laplace, format_rational, nullspace,
                             nullspace_rows, rank, rational)
from jetinv.polyalg import RatFunc, VarTable

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rational_and_format():
    assert rational("-17/3") == Fraction(-17, 3)
    assert rational(4) == 4
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        rational(1.5)


def test_matrix_shape_checks():
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        ExactMatrix.from_rows([[1, 2], [3]])


def test_nullspace_small():
    M = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    basis = nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert M @ v == [0, 0]
    assert basis[0] == (Fraction(-2), Fraction(1), Fraction(0))


def test_nullspace_rows_sparse():
    rows = [{0: Fraction(1), 2: Fraction(-1)}]
    assert nullspace_rows(rows, 3) == [(0, 1, 0), (1, 0, 1)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    M = ExactMatrix.from_rows(rows)
    basis = nullspace(M)
    assert rank(M) + len(basis) == M.cols
    for v in basis:
        assert all(x == 0 for x in M @ v)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_det_agrees_with_laplace(rows):
    assert det(ExactMatrix.from_rows(rows)) == det_laplace(rows)
    assert (det(ExactMatrix.from_rows(rows)) == 0) == (rank(ExactMatrix.from_rows(rows)) < len(rows))


def test_det_laplace_over_polynomials():
    t = VarTable(("a", "b"))
    a, b = RatFunc.var(t, "a"), RatFunc.var(t, "b")
    zero = RatFunc.constant(t, 0)
    assert det_laplace([[a, b], [b, a]], zero) == a * a - b * b


def test_quadext_arithmetic():
    t = VarTable(("r",))
    r = RatFunc.var(t, "r")
    s = QuadExt.root(r)
    assert s * s == QuadExt.embed(r, r)
    x = QuadExt.embed(RatFunc.constant(t, 2), r) + s
    assert x * x.inverse() == QuadExt.embed(RatFunc.constant(t, 1), r)
    assert (x * x.conjugate()).is_rational()
    assert x.norm() == 4 - r
