from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsk.linsolve import RatMatrix, in_span, matvec, nullspace, rank, solve_combination, span


def test_identity_has_trivial_kernel():
    assert nullspace(RatMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).dimension == 0


def test_zero_matrix_kernel_is_everything():
    assert nullspace(RatMatrix.from_rows([[0] * 5, [0] * 5])).dimension == 5


def test_single_row_kernel():
    assert list(nullspace(RatMatrix.from_rows([[1, -1]])).basis) == [(1, 1)]


def test_in_span_examples():
    S = span([(1, 0, 2), (0, 1, 1)])
    assert in_span((0, 0, 0), S) == (0, 0)
    b1, b2 = S.basis
    v = tuple(x + 2 * y for x, y in zip(b1, b2))
    assert in_span(v, S) == (1, 2)
    assert in_span((1, 0), span([(1, 1)])) is None


def test_solve_combination_sparse():
    cols = [{"a": Fraction(1)}, {"b": Fraction(2)}]
    assert solve_combination(cols, {"a": 3, "b": 4}) == [3, 2]
    assert solve_combination(cols, {"c": 1}) is None


matrices = st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=c, max_size=c),
    min_size=1, max_size=5))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_nullspace_matches_sympy(rows):
    M = RatMatrix.from_rows(rows)
    S = nullspace(M)
    for v in S.basis:
        assert all(x == 0 for x in matvec(M, v))
    sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    assert S.dimension == len(sm.nullspace())
    assert rank(M) == sm.rank()


@settings(max_examples=50, deadline=None)
@given(matrices, st.data())
def test_row_equivalent_matrices_same_basis(rows, data):
    M = RatMatrix.from_rows(rows)
    k = data.draw(st.integers(0, len(rows) - 1))
    f = data.draw(st.fractions(min_value=1, max_value=4, max_denominator=3))
    mixed = [list(r) for r in rows]
    mixed[k] = [x * f for x in mixed[k]]
    mixed.append([a + b for a, b in zip(rows[0], rows[-1])])
    assert nullspace(M).basis == nullspace(RatMatrix.from_rows(mixed)).basis
