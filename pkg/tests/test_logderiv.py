from fractions import Fraction as F

import pytest

from umbra.errors import NotBinomial, OrderExhausted, PreconditionViolated
from umbra.family import binomial_from_f, builtin, random_family
from umbra.logderiv import (
    BiSeries,
    assemble_expansion,
    binomial_closed_form,
    build_context,
    degree_bound,
    degree_bound_check,
    direct_logderiv,
    dual_fn_logderiv,
    neumann_xi,
    oracle_logderiv,
    series_family_logderiv,
)
from umbra.series import XPoly, YSeries

# tables large enough for n <= 8, H = 6 (depth 42)
BIG = {name: builtin(name, 10, 44) for name in ("monomial", "falling", "qexp")}
CTX = {name: build_context(fam) for name, fam in BIG.items()}


def coeffs(values):
    return tuple(F(v) for v in values)


# -- oracle -----------------------------------------------------------------------------


def test_oracle_spot_values():
    # (x-2)/(x-3) = 1 + sum 3^(h-1) x^-h
    assert oracle_logderiv(BIG["qexp"], 3, 6).coeffs == coeffs([1, 1, 3, 9, 27, 81, 243])
    # (2x-1)/(2(x-1)) = 1 + sum x^-h / 2
    assert oracle_logderiv(BIG["falling"], 2, 6).coeffs == coeffs([1] + ["1/2"] * 6)
    assert oracle_logderiv(BIG["monomial"], 5, 3).coeffs == coeffs([1, 0, 0, 0])


def test_oracle_handles_repeated_roots_at_zero():
    # qexp p_2 = x^2: x p'/(2 p) = 1 exactly
    assert BIG["qexp"].polys[2] == XPoly([0, 0, 1])
    assert oracle_logderiv(BIG["qexp"], 2, 4).coeffs == coeffs([1, 0, 0, 0, 0])


# -- context ------------------------------------------------------------------------------


def test_monomial_context_is_trivial():
    ctx = CTX["monomial"]
    assert all(ctx.ell(k) == XPoly([1 if k == 0 else 0]) for k in range(ctx.order + 1))
    assert all(ctx.m(k) == XPoly([1 if k == 0 else 0]) for k in range(ctx.order + 1))


def test_context_degrees_and_constant_terms():
    ctx = CTX["qexp"]
    for name in ("falling", "qexp"):
        c = CTX[name]
        for k in range(1, 9):
            assert c.ell(k).degree() <= k - 1
            assert c.m(k).degree() <= k - 1
    h, d = ctx.h_series, ctx.d_series
    assert h.row(0) == XPoly([1]) and d.row(0) == XPoly([1])
    for k in range(1, 6):
        assert h.row(k).degree() <= k - 1
        assert d.row(k).degree() <= k - 1


def test_context_refuses_nonvanishing_families():
    with pytest.raises(PreconditionViolated):
        build_context(random_family(1, 8, 8, vanishing=False))


# -- engines --------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["monomial", "falling", "qexp"])
@pytest.mark.parametrize("n", range(1, 9))
def test_graded_engine_matches_oracle(name, n):
    assert assemble_expansion(CTX[name], n, 6) == oracle_logderiv(BIG[name], n, 6)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_exact_and_graded_engines_agree(seed, n):
    fam = random_family(seed, 12, 13)
    ctx = build_context(fam)
    H = 12 // (n - 1)
    exact = assemble_expansion(ctx, n, H, engine="exact")
    assert exact == assemble_expansion(ctx, n, H) == oracle_logderiv(fam, n, H)


def test_n_equal_one_degenerates():
    for name, ctx in CTX.items():
        xis = neumann_xi(ctx, 1, 8)
        assert xis[0] == XPoly([1])
        assert all(x.is_zero() for x in xis[1:])
        assert assemble_expansion(ctx, 1, 6).coeffs == coeffs([1, 0, 0, 0, 0, 0, 0])


def test_depth_increase_does_not_change_coefficients():
    ctx = build_context(random_family(7, 10, 44))
    for n in (2, 4, 7):
        base = assemble_expansion(ctx, n, 6)
        assert assemble_expansion(ctx, n, 6, K=6 * (n - 1) + 2) == base


def test_too_little_depth_is_detected_by_the_oracle():
    fam = BIG["qexp"]
    short = assemble_expansion(CTX["qexp"], 3, 6, K=4)
    assert short != oracle_logderiv(fam, 3, 6)


def test_insufficient_table_is_reported():
    fam = builtin("qexp", 6, 8)
    with pytest.raises(Exception) as info:
        assemble_expansion(build_context(fam), 8, 6)
    assert "table" in str(info.value)
    with pytest.raises(OrderExhausted):
        neumann_xi(build_context(fam), 3, 20)


# -- degree bound -------------------------------------------------------------------------


def test_degree_bound_values():
    assert [degree_bound(2, M) for M in range(4)] == [0, 0, 0, 0]
    assert [degree_bound(3, M) for M in range(6)] == [0, 0, 1, 1, 2, 2]


def test_falling_xi_are_constants():
    report = degree_bound_check(CTX["falling"], 2, 10)
    assert report.ok and set(report.degrees) <= {0, float("-inf")}


def test_qexp_degree_bound_n3():
    report = degree_bound_check(CTX["qexp"], 3, 10)
    assert report.ok
    assert all(d <= M // 2 for M, d in enumerate(report.degrees))


@pytest.mark.parametrize("seed", range(4))
def test_degree_bound_on_random_families(seed):
    ctx = build_context(random_family(seed, 12, 13), order=12)
    for n in range(2, 9):
        report = degree_bound_check(ctx, n, 12)
        assert report.ok, report.violations()


# -- binomial closed form --------------------------------------------------------------


@pytest.mark.parametrize("f", [[0, 1], "exp", [0, 1, 1], [0, 1, 0, F(1, 6)]])
def test_binomial_closed_form_cross_check(f):
    from umbra.series import exp_series

    series = exp_series(40) - 1 if f == "exp" else YSeries(f, 40)
    fam = binomial_from_f(series, 10, 40)
    ctx = build_context(fam)
    for n in range(1, 7):
        closed = binomial_closed_form(fam, n, 5)
        assert closed == assemble_expansion(ctx, n, 5) == oracle_logderiv(fam, n, 5)


def test_closed_form_needs_a_binomial_family():
    with pytest.raises(NotBinomial):
        binomial_closed_form(BIG["qexp"], 2, 3)


# -- dual formula --------------------------------------------------------------------------


def test_falling_dual_matches_gregory_coefficients():
    # f*_n = log(1+y)^n, so (y/n) f*_n'/f*_n = y / ((1+y) log(1+y)); with
    # y/log(1+y) = 1 + y/2 - y^2/12 + y^3/24 - 19y^4/720 this is
    # 1 - y/2 + 5y^2/12 - 3y^3/8 + 251y^4/720
    r = dual_fn_logderiv(BIG["falling"], 3, 4)
    assert r.coeffs == coeffs([1, "-1/2", "5/12", "-3/8", "251/720"])
    assert r.match and r.nonnegative


@pytest.mark.parametrize("name", ["monomial", "falling", "qexp"])
@pytest.mark.parametrize("n", range(1, 7))
def test_dual_engine_matches_direct(name, n):
    r = dual_fn_logderiv(BIG[name], n, 6)
    assert r.match and r.nonnegative


def test_dual_psi_valuation_bound():
    for n in (2, 3, 4):
        r = dual_fn_logderiv(random_family(2, 10, 44), n, 6)
        assert r.match
        for k, v in enumerate(r.psi_valuations):
            assert v is None or v * (n - 1) >= k * n


def test_general_series_entry_on_exp_xy():
    order = 14
    rows = [[0] * a + [F(1, 1)] for a in range(order + 1)]
    from math import factorial

    rows = [[c / factorial(a) for c in r] for a, r in enumerate(rows)]
    F_xy = BiSeries(rows, order, order, "x", "y")
    values, _ = series_family_logderiv(F_xy, 3, 4)
    assert values == coeffs([1, 0, 0, 0, 0])


def test_general_series_entry_with_non_polynomial_columns():
    # g_a = (y e^y)^a: (y/n) g_n'/g_n = 1 + y for every n
    from math import factorial

    from umbra.series import exp_series

    order = 20
    g = YSeries.gen(order) * exp_series(order)
    rows, power = [], YSeries.one(order)
    for a in range(order + 1):
        rows.append([c / factorial(a) for c in power.coeffs])
        power = power * g
    F_xy = BiSeries(rows, order, order, "x", "y")
    values, _ = series_family_logderiv(F_xy, 2, 4)
    assert values == coeffs([1, 1, 0, 0, 0])
    assert direct_logderiv(g**2, 2, 4) == values


def test_dual_precondition():
    with pytest.raises(PreconditionViolated):
        dual_fn_logderiv(random_family(3, 10, 30, vanishing=False), 2, 3)
