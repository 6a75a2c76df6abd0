from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conformal_ladder.algebra_core import (
    ExactComplex,
    Mat4,
    Poly4,
    QSeries,
    anticommutator,
    bernoulli,
    commutator,
    divisor_power_sum,
    format_rational,
    inverse_exact,
    qseries_log_derivative,
    qseries_mul,
    rank,
    solve_exact,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
exact_complex = st.builds(ExactComplex, rationals, rationals)
small_ints = st.integers(-4, 4)
int_matrix = st.lists(st.lists(st.builds(ExactComplex, small_ints, small_ints), min_size=4, max_size=4),
                      min_size=4, max_size=4).map(Mat4)


# ExactComplex


def test_exact_complex_basic():
    i = ExactComplex(0, 1)
    assert i * i == ExactComplex(-1)
    assert ExactComplex(1, 1) / ExactComplex(1, -1) == i
    assert ExactComplex(Fraction(2, 4), 0).re == Fraction(1, 2)
    assert (ExactComplex(3, 4)).abs_sq() == 25


def test_exact_complex_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ExactComplex(1) / ExactComplex(0)


@given(exact_complex, exact_complex, exact_complex)
def test_exact_complex_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert hash(a + 0) == hash(a)


@given(exact_complex)
def test_exact_complex_to_complex(a):
    assert abs(a.to_complex() - complex(float(a.re), float(a.im))) < 1e-12


# Mat4


@given(int_matrix, int_matrix, int_matrix)
def test_mat4_associative_and_adjoint(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ b).adjoint() == b.adjoint() @ a.adjoint()
    assert (a @ b).trace() == (b @ a).trace()
    assert commutator(a, b) + anticommutator(a, b) == (a @ b).scale(2)


@given(int_matrix)
def test_mat4_numpy_roundtrip(a):
    import numpy as np

    m = a.to_numpy()
    assert np.allclose(m @ m, (a @ a).to_numpy())
    assert len(a.real_coordinates()) == 32


def test_mat4_identity_and_kron():
    one = Mat4.identity()
    assert Mat4.kron(((1, 0), (0, 1)), ((1, 0), (0, 1))) == one
    assert one.trace() == ExactComplex(4)
    assert Mat4.zeros().is_zero()


# exact linear algebra


def test_rank_and_solve():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert solve_exact([[2, 0], [0, 3]], [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    assert solve_exact([[1, 1], [1, 1]], [1, 2]) is None
    inv = inverse_exact([[2, 1], [1, 1]])
    assert inv == [[1, -1], [-1, 2]]


# QSeries


def test_qseries_difference_of_squares():
    a = QSeries([1, 1], 2)
    b = QSeries([1, -1], 2)
    assert list(qseries_mul(a, b)) == [1, 0, -1]


def test_qseries_inverse():
    a = QSeries([1, -1], 5)
    assert a.inverse() * a == QSeries.one(5)


def test_qseries_binomial_series_oracle():
    one_minus_q2 = QSeries([1, 0, -1], 4)
    inv = one_minus_q2.inverse()
    assert list(inv * inv * inv * inv) == [1, 0, 4, 0, 10]


def test_qseries_order_mismatch():
    with pytest.raises(ValueError):
        qseries_mul(QSeries([1], 2), QSeries([1], 3))


def test_qseries_truncation_closed():
    a = QSeries([1, 1, 1], 2)
    assert (a * a).order == 2


def test_qseries_log_derivative_geometric():
    # q d/dq log 1/(1-q) = q/(1-q)
    s = qseries_log_derivative(QSeries([1, -1], 6).inverse())
    assert list(s) == [0, 1, 1, 1, 1, 1, 1]


def test_qseries_log_derivative_needs_constant():
    with pytest.raises(ZeroDivisionError):
        qseries_log_derivative(QSeries([0, 1], 3))


@given(st.lists(rationals, min_size=1, max_size=8), st.lists(rationals, min_size=1, max_size=8))
def test_qseries_log_derivative_additive(a, b):
    # log derivative of a product is the sum of log derivatives
    a[0] = a[0] or Fraction(1)
    b[0] = b[0] or Fraction(1)
    x, y = QSeries(a, 7), QSeries(b, 7)
    assert qseries_log_derivative(x * y) == qseries_log_derivative(x) + qseries_log_derivative(y)


# Bernoulli, divisor sums


def test_bernoulli_known_values():
    # standard table, B_1 = -1/2 convention (irrelevant for even m)
    table = {2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42), 8: Fraction(-1, 30),
             10: Fraction(5, 66), 12: Fraction(-691, 2730), 14: Fraction(7, 6)}
    for m, v in table.items():
        assert bernoulli(m) == v


@pytest.mark.parametrize("m", [0, 1, 3, -2])
def test_bernoulli_rejects(m):
    with pytest.raises(ValueError):
        bernoulli(m)


@given(st.integers(1, 400), st.integers(0, 7))
def test_divisor_power_sum_brute_force(n, k):
    assert divisor_power_sum(n, k) == sum(d**k for d in range(1, n + 1) if n % d == 0)


def test_divisor_power_sum_examples():
    assert divisor_power_sum(4, 3) == 73
    assert divisor_power_sum(12, 3) == 2044


# Poly4


def test_poly4_canonical_and_degree():
    z = [Poly4.variable(a) for a in range(1, 5)]
    p = z[0] * z[1] - z[1] * z[0]
    assert p.is_zero() and p.terms == {}
    assert (z[3] * z[3]).degree() == 2
    assert (z[3] + 1).degree() is None
    assert (z[3] * z[3]).derivative(4) == z[3] * 2


@given(st.lists(st.tuples(st.tuples(*[st.integers(0, 3)] * 4), st.integers(-5, 5)), max_size=6),
       st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
def test_poly4_evaluation_is_multiplicative(terms, point):
    p = Poly4(dict(terms))
    q = p + Poly4.variable(2)
    assert abs((p * q).evaluate(point) - p.evaluate(point) * q.evaluate(point)) < 1e-6 * (
        1 + abs(p.evaluate(point) * q.evaluate(point))
    )


def test_format_rational():
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(Fraction(-6, 3)) == "-2"
