from fractions import Fraction

import pytest

from conftest import cached_builtin, cached_random
from umbra import opcalc as oc
from umbra.errors import WindowTooSmall
from umbra.series import XPoly

N = 10
NAMES = ["monomial", "falling", "qexp"]


def all_ok(report):
    bad = [c for c in report.checks if not c.ok]
    assert not bad, bad
    return True


def test_elementary_matrices():
    X, D, T = oc.op_X(4), oc.op_D(4), oc.op_theta(4)
    assert X.column(2) == XPoly.monomial(3)
    assert (X.raise_by, X.window) == (1, 3)
    assert D.column(3) == XPoly([0, 0, 3])
    assert oc.compare("xD", X * D, T).ok
    assert (D * X).window == 3


def test_product_window_rule():
    D, X = oc.op_D(6), oc.op_X(6)
    # window(AB) = min(window(B), window(A) - raise(B), N)
    assert (X * X).window == 4
    assert (D * X * X).window == 4
    assert (X * D).window == 6
    assert (X * X).raise_by == 2


def test_apply_outside_window_is_refused():
    with pytest.raises(WindowTooSmall):
        oc.op_X(3).apply(XPoly.monomial(3))


def test_operator_json_round_trip():
    U = oc.op_U(cached_builtin("qexp"))
    again = oc.OpMatrix.from_json(U.to_json())
    assert again.entries == U.entries and again.window == U.window and again.raise_by == U.raise_by


@pytest.mark.parametrize("name", NAMES)
def test_raising_and_lowering_act_on_the_basis(name):
    fam = cached_builtin(name)
    U, DP = oc.op_U(fam), oc.op_DP(fam)
    for n in range(1, N):
        assert U.apply(fam.polys[n - 1]) == fam.polys[n]
        assert DP.apply(fam.polys[n]) == fam.polys[n - 1] * n


def test_qexp_theta_on_p3():
    fam = cached_builtin("qexp")
    p2, p3 = fam.polys[2], fam.polys[3]
    theta_p3 = oc.op_theta(N).apply(p3)
    assert theta_p3 == XPoly([0, 0, -6, 3])
    assert theta_p3 == p3 * 3 + p2 * 3
    assert oc.qexp_theta_rhs(fam).apply(p3) == theta_p3


def test_compare_reports_first_mismatch():
    I = oc.identity(5)
    rows = [list(r) for r in I.entries]
    rows[1][3] = Fraction(7)
    bad = oc.OpMatrix(tuple(tuple(r) for r in rows), 0, 5)
    check = oc.compare("perturbed", bad, I)
    assert not check.ok
    assert check.mismatch == (3, 1, 7, 0)


def test_unknown_ratios_cut_the_window():
    fam = cached_builtin("falling")
    ratios = oc.ratio_table(fam, N, lambda n: fam.fns[n + 1])
    ratios[6] = None
    op = oc.indexed_series_op(fam, ratios, oc.op_D(N))
    assert op.window == 5


def test_random_operator_is_seeded_and_lower_triangular_in_degree():
    a, b = oc.random_operator(6, 3), oc.random_operator(6, 3)
    assert a.entries == b.entries
    assert all(a.entries[i][j] == 0 for j in range(7) for i in range(j + 1, 7))


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize(
    "check",
    [
        oc.verify_commutator,
        oc.verify_inverse,
        oc.xi_representation_check,
        oc.verify_prop_dp,
        oc.verify_prop_x,
        oc.verify_dpk,
        oc.verify_conj_dp,
        oc.verify_theta_corollary,
        oc.verify_eigen_q,
        oc.verify_overline,
    ],
    ids=lambda f: f.__name__,
)
def test_identities_on_builtins(name, check):
    assert all_ok(check(cached_builtin(name)))


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_identities_on_random_families(seed):
    fam = cached_random(seed, vanishing=seed % 2 == 0)
    for check in (oc.verify_commutator, oc.verify_prop_x, oc.verify_conj_dp, oc.verify_theta_corollary):
        assert all_ok(check(fam))


@pytest.mark.parametrize("p", NAMES)
@pytest.mark.parametrize("q", NAMES)
def test_change_of_basis_pairs(p, q):
    assert all_ok(oc.verify_change_of_basis(cached_builtin(p), cached_builtin(q)))


@pytest.mark.parametrize("name", NAMES)
def test_representation_theorem(name):
    fam = cached_builtin(name)
    for label, T in [("D", oc.op_D(N)), ("U", oc.op_U(fam)), ("T", oc.random_operator(N, 11))]:
        report = oc.verify_representation_theorem(fam, T, label)
        assert all_ok(report)
    # U raises degree, so the fourth form is reported as skipped
    notes = [c.note for c in oc.verify_representation_theorem(fam, oc.op_U(fam), "U").checks]
    assert any("skipped" in n for n in notes)


def test_overline_of_the_named_operators():
    D, X = oc.op_D(6), oc.op_X(6)
    assert oc.overline(D).entries == oc.mult_by_y(6).entries
    assert oc._compare_overline("x", oc.overline(X), oc.d_dy(6)).ok


def test_worked_example_identities_for_qexp():
    fam = cached_builtin("qexp")
    assert oc.compare("dp", oc.qexp_dp_series(fam), oc.op_DP(fam)).ok
    assert oc.compare("theta", oc.qexp_theta_rhs(fam), oc.op_theta(N)).ok


def test_binomial_extras_are_not_claimed_for_qexp():
    fam = cached_builtin("qexp")
    names = [c.name for c in oc.verify_prop_dp(fam).checks]
    assert "prop-dp[qexp series]" in names
    assert not any("binomial" in n for n in names)
