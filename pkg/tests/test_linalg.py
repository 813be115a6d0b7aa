from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from realsph import linalg as la
from realsph.linalg import RationalMatrix

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def square(n=st.integers(1, 4)):
    return n.flatmap(lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=k, max_size=k))


def _sym(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in A])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_and_nullspace(A):
    n = len(A[0])
    assert la.rank(A) == _sym(A).rank()
    ker = la.nullspace(A, n)
    assert len(ker) == n - la.rank(A)
    for v in ker:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


@settings(max_examples=60, deadline=None)
@given(square())
def test_det_charpoly_inverse(A):
    S = _sym(A)
    assert la.det(A) == Fraction(str(S.det()))
    t = sympy.Symbol("t")
    want = [Fraction(str(c)) for c in sympy.Poly(S.charpoly(t).as_expr(), t).all_coeffs()]
    assert la.charpoly(A) == want
    if la.det(A) != 0:
        inv = la.inverse(A)
        n = len(A)
        assert la.matmul(A, inv) == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve(A, data):
    x = data.draw(st.lists(small, min_size=len(A[0]), max_size=len(A[0])))
    b = [sum(a * y for a, y in zip(r, x)) for r in A]
    sol = la.solve(A, b)
    assert sol is not None
    assert [sum(a * y for a, y in zip(r, sol)) for r in A] == b


def test_solve_inconsistent():
    assert la.solve([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]], [Fraction(1), Fraction(3)]) is None


@settings(max_examples=40, deadline=None)
@given(matrices(cols=st.just(3)), matrices(cols=st.just(3)))
def test_intersect_inside_both(A, B):
    I = la.intersect(A, B, 3)
    for v in I:
        assert la.in_span(la.span_basis(A, 3), v) and la.in_span(la.span_basis(B, 3), v)
    dim_sum = la.rank(list(A) + list(B))
    assert len(I) == la.rank(A) + la.rank(B) - dim_sum


def test_frac_coercion():
    assert la.frac("3/4") == Fraction(3, 4)
    assert la.frac(sympy.Rational(-2, 6)) == Fraction(-1, 3)
    with pytest.raises(TypeError):
        la.frac(0.5)
    assert la.fmt(Fraction(6, 3)) == "2" and la.fmt(Fraction(-1, 2)) == "-1/2"


def test_rational_matrix_ops():
    A = RationalMatrix.of([[1, 2], [3, 4]])
    B = RationalMatrix.unit(2, 0, 1)
    assert (A @ B).to_json() == [["0", "1"], ["0", "3"]]
    assert (A - A).is_zero()
    assert A.T().trace() == 5
    assert (Fraction(1, 2) * A)[1, 1] == 2
    with pytest.raises(Exception):
        A + RationalMatrix.identity(3)
