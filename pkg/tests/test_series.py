from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from umbra.errors import (
    BadConstantTerm,
    BadLowestTerms,
    NonUnitDivisor,
    NonzeroConstantTerm,
    OrderExhausted,
    SeriesError,
)
from umbra.series import (
    NEG_INF,
    X,
    BiSeries,
    XPoly,
    YSeries,
    apply_series_in_D,
    deriv_y,
    exp_series,
    exp_xy,
    rat_from_json,
    rat_to_json,
    series_compose,
    series_div,
    series_exp,
    series_log,
    series_revert,
    zero_derivative_L,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series_st(order=8, unit=False, vanishing=False):
    coeffs = st.lists(small, min_size=order + 1, max_size=order + 1)
    if unit:
        coeffs = coeffs.filter(lambda c: c[0] != 0)
    if vanishing:
        coeffs = coeffs.map(lambda c: [Fraction(0)] + c[1:])
    return coeffs.map(lambda c: YSeries(c, order))


polys = st.lists(small, max_size=7).map(XPoly)


# -- rationals and polynomials ----------------------------------------------


def test_rational_json_pairs():
    assert rat_to_json(Fraction(-3, 4)) == ["-3", "4"]
    assert rat_from_json(["-3", "4"]) == Fraction(-3, 4)
    with pytest.raises(ValueError):
        rat_from_json(["1", "2", "3"])


def test_zero_polynomial_has_minus_infinite_degree():
    assert XPoly().degree() == NEG_INF
    assert XPoly([0, 0]).is_zero()
    assert XPoly([1, 2, 0]).degree() == 1


def test_polynomial_printing_is_descending():
    assert str(XPoly([0, -1, 1])) == "x^2 - x"
    assert str(XPoly([Fraction(1, 2), 0, -3])) == "-3*x^2 + 1/2"


def test_divmod_by_x_minus_one():
    q, r = XPoly([-1, 0, 0, 1]).divmod(XPoly([-1, 1]))
    assert q == XPoly([1, 1, 1])
    assert r.is_zero()


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divmod_reconstructs(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree() < b.degree()


@given(polys, polys, polys)
def test_polynomial_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b).deriv() == a.deriv() * b + a * b.deriv()


def test_series_in_D_acts_by_taylor_shift():
    # exp(D) p(x) = p(x + 1)
    p = XPoly([0, 0, 0, 1])
    assert apply_series_in_D(exp_series(3), p) == XPoly([1, 3, 3, 1])
    with pytest.raises(OrderExhausted):
        apply_series_in_D(exp_series(2), p)


# -- truncated series -----------------------------------------------------------


def test_series_print_ascending():
    assert str(exp_series(3) - 1) == "y + 1/2*y^2 + 1/6*y^3 + O(y^4)"


def test_binary_operations_truncate_to_smaller_order():
    a = YSeries([1, 1, 1], 2)
    b = YSeries([1, 2, 3, 4, 5], 4)
    assert (a + b).order == 2
    assert (a * b).order == 2


def test_reading_past_the_order_raises():
    s = YSeries([1, 2], 3)
    assert s[3] == 0
    with pytest.raises(OrderExhausted):
        s[4]


def test_division_needs_a_unit():
    with pytest.raises(NonUnitDivisor):
        series_div(YSeries.one(4), YSeries.gen(4))


def test_exp_and_log_coefficients():
    y = YSeries.gen(6)
    assert series_exp(y).coeffs == tuple(Fraction(1, factorial(k)) for k in range(7))
    log1p = series_log(1 + y)
    assert log1p.coeffs == tuple([Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, 7)])
    with pytest.raises(BadConstantTerm):
        series_exp(1 + y)
    with pytest.raises(BadConstantTerm):
        series_log(y)


def test_revert_exp_minus_one_is_log():
    phi = series_revert(exp_series(8) - 1)
    assert phi == series_log(1 + YSeries.gen(8))


def test_revert_quadratic_gives_signed_catalan_numbers():
    # y + y^2 = t  =>  y = sum (-1)^(k-1) C_(k-1) t^k
    phi = series_revert(YSeries([0, 1, 1], 9))
    catalan = [comb(2 * k, k) // (k + 1) for k in range(9)]
    assert phi.coeffs[1:] == tuple(Fraction((-1) ** (k - 1) * catalan[k - 1]) for k in range(1, 10))


def test_revert_and_compose_preconditions():
    with pytest.raises(BadLowestTerms):
        series_revert(YSeries([0, 2], 3))
    with pytest.raises(NonzeroConstantTerm):
        series_compose(YSeries.gen(3), YSeries([1, 1], 3))


def test_zero_derivative_L():
    g = YSeries([5, 1, 2, 3], 3)
    assert zero_derivative_L(g) == YSeries([1, 2, 3], 2)
    with pytest.raises(OrderExhausted):
        zero_derivative_L(YSeries([1], 0))


def test_shift_down_refuses_low_terms():
    with pytest.raises(SeriesError):
        YSeries([1, 1], 3).shift_down(1)


def test_series_json_round_trip():
    s = YSeries([XPoly([0, 1]), XPoly([Fraction(1, 2)])], 3)
    assert YSeries.from_json(s.to_json()) == s


@given(series_st(), series_st(unit=True))
def test_division_inverts_multiplication(a, b):
    assert series_div(a * b, b) == a
    assert series_div(a, b) * b == a


@given(series_st(vanishing=True))
def test_log_inverts_exp(a):
    assert series_log(series_exp(a)) == a


@given(series_st(vanishing=True).filter(lambda s: s.coeffs[1] != 0))
def test_reversion_composes_to_identity(f):
    f = f * (1 / f.coeffs[1])
    phi = series_revert(f)
    assert series_compose(f, phi) == YSeries.gen(f.order)
    assert series_compose(phi, f) == YSeries.gen(f.order)


@given(series_st(), series_st())
def test_product_rule(a, b):
    assert deriv_y(a * b) == deriv_y(a) * b.truncate(a.order - 1) + a.truncate(a.order - 1) * deriv_y(b)


# -- bivariate series ------------------------------------------------------------


def test_exp_xy_rows():
    e = exp_xy(4)
    assert e.row(3) == XPoly.monomial(3, Fraction(1, 6))
    assert e.deriv_inner().truncate(3) == e.shift_outer_up(1).truncate(3)


def test_bivariate_division_matches_rowwise_series():
    # (1 + x y) / (1 - y) has rows sum_{j<=k} coefficients: 1, 1 + x, 1 + x, ...
    num = BiSeries([[1], [0, 1]], 5)
    den = BiSeries([[1], [-1]], 5)
    q = num / den
    assert q.row(0) == XPoly([1])
    assert all(q.row(k) == XPoly([1, 1]) for k in range(1, 6))


def test_truncated_inner_mode_inverts_unit_rows():
    a = BiSeries([[1, 1], [0, 2]], 3, 4, "x", "y")
    inv = BiSeries([[1]], 3, 4, "x", "y") / a
    prod = inv * a
    assert prod.rows[0] == (1, 0, 0, 0, 0)
    assert all(not any(r) for r in prod.rows[1:])


def test_bivariate_division_needs_unit_row():
    with pytest.raises(NonUnitDivisor):
        BiSeries([[1]], 3) / BiSeries([[0, 1]], 3)


def test_bivariate_json_round_trip():
    b = BiSeries([[1, 2], [], [Fraction(1, 3)]], 2)
    assert BiSeries.from_json(b.to_json()) == b


@given(st.lists(st.lists(small, max_size=4), min_size=4, max_size=4))
def test_bivariate_product_agrees_with_yseries(rows):
    b = BiSeries(rows, 3)
    s = b.to_yseries()
    assert (b * b).to_yseries() == s * s
