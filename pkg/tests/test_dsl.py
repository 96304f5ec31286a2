from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from umbra import opcalc
from umbra.dsl import (
    Atom,
    BinOp,
    Call,
    Equation,
    Neg,
    Num,
    Pow,
    parse_identity,
    parse_op,
    parse_series,
    to_text,
    tokenize,
)
from umbra.errors import BadConstantTerm, DSLSyntaxError, NonUnitDivisor, UnknownAtom
from umbra.series import YSeries, exp_series

from conftest import cached_builtin

# -- parsing ---------------------------------------------------------------------------------


def test_variable_node():
    assert parse_series("y").node == Atom("y")


def test_precedence():
    node = parse_series("1 + 2*y^3").node
    assert node == BinOp("+", Num(F(1)), BinOp("*", Num(F(2)), Pow(Atom("y"), 3)))
    assert parse_series("1 - y - y").node == BinOp("-", BinOp("-", Num(F(1)), Atom("y")), Atom("y"))
    assert parse_series("-y^2").node == Neg(Pow(Atom("y"), 2))


def test_rational_literal_is_one_token():
    assert parse_series("3/4").node == Num(F(3, 4))
    assert parse_series("3 / 4").node == BinOp("/", Num(F(3)), Num(F(4)))


def test_operator_commutator_ast():
    node = parse_op("DP*UP - UP*DP").node
    assert node == BinOp("-", BinOp("*", Atom("DP"), Atom("UP")), BinOp("*", Atom("UP"), Atom("DP")))


def test_identity_needs_double_equals():
    eq = parse_identity("G*GINV == ID")
    assert isinstance(eq, Equation)
    with pytest.raises(DSLSyntaxError):
        parse_identity("G*GINV")


# -- errors ----------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, offset",
    [
        ("y + ", 4),
        ("y $ 2", 2),
        ("(y + 1", 6),
        ("y^1/2", 2),
        ("exp y", 4),
        ("y y", 2),
    ],
)
def test_syntax_error_offsets(text, offset):
    with pytest.raises(DSLSyntaxError) as info:
        parse_series(text)
    assert info.value.offset == offset


def test_offsets_count_bytes():
    # "é" takes two bytes in UTF-8
    with pytest.raises(DSLSyntaxError) as info:
        parse_series("y + é")
    assert info.value.offset == 4
    with pytest.raises(DSLSyntaxError) as info:
        parse_series("é + $")
    assert info.value.offset == 0
    assert tokenize("1/2 + y")[-1].offset == 7


def test_unknown_atoms():
    with pytest.raises(UnknownAtom) as info:
        parse_op("UP*Q")
    assert info.value.offset == 3
    with pytest.raises(UnknownAtom):
        parse_series("x + 1")
    with pytest.raises(UnknownAtom):
        parse_op("exp(D)")


def test_operator_powers_are_non_negative():
    with pytest.raises(DSLSyntaxError):
        parse_op("D^-1")


# -- series evaluation --------------------------------------------------------------------


def test_exp_minus_one():
    s = parse_series("exp(y)-1").evaluate(6)
    assert s == exp_series(6) - 1
    assert s.coeffs[:4] == (0, 1, F(1, 2), F(1, 6))


def test_hand_expansion():
    assert parse_series("y + 1/2*y^2").evaluate(5) == YSeries([0, 1, F(1, 2)], 5)


def test_division_by_power_of_y():
    # (exp(y) - 1)/y = 1 + y/2 + y^2/6 + ...
    s = parse_series("(exp(y) - 1)/y").evaluate(4)
    assert s.coeffs == (1, F(1, 2), F(1, 6), F(1, 24), F(1, 120))
    assert parse_series("y^3 / y^2").evaluate(3) == YSeries.gen(3)
    # every factor must itself be a power series
    with pytest.raises(NonUnitDivisor):
        parse_series("y^3 * y^-2").evaluate(3)
    with pytest.raises(NonUnitDivisor):
        parse_series("1/y").evaluate(3)


def test_log_of_exp():
    assert parse_series("log(exp(y))").evaluate(8) == YSeries.gen(8)
    assert parse_series("exp(log(1 + y)) - 1").evaluate(8) == YSeries.gen(8)


def test_function_argument_checks():
    with pytest.raises(BadConstantTerm):
        parse_series("exp(1 + y)").evaluate(4)
    with pytest.raises(BadConstantTerm):
        parse_series("log(y)").evaluate(4)


# -- operator evaluation ---------------------------------------------------------------


def test_g_times_ginv_is_identity():
    fam = cached_builtin("qexp")
    assert parse_op("G*GINV").evaluate(fam).entries == opcalc.identity(fam.N).entries


def test_scalar_is_a_multiple_of_identity():
    fam = cached_builtin("falling")
    assert parse_op("3/2").evaluate(fam).entries == (opcalc.identity(fam.N) * F(3, 2)).entries
    assert parse_op("D/2").evaluate(fam).entries == (opcalc.op_D(fam.N) * F(1, 2)).entries
    with pytest.raises(ValueError):
        parse_op("D/X").evaluate(fam)


def test_product_is_composition():
    fam = cached_builtin("monomial")
    XD = parse_op("X*D").evaluate(fam)
    assert XD.entries == (opcalc.op_X(fam.N) * opcalc.op_D(fam.N)).entries
    assert parse_op("THETA").evaluate(fam).entries == XD.entries


def test_qexp_theta_rhs():
    fam = cached_builtin("qexp")
    lhs = parse_op("THETA").evaluate(fam)
    rhs = parse_op("UP*DP + 1/2*UP^2*DP^2*D").evaluate(fam)
    assert opcalc.compare("theta", lhs, rhs).ok


# -- round trip ----------------------------------------------------------------------------


def _series_trees():
    leaves = st.one_of(
        st.just(Atom("y")),
        st.builds(Num, st.fractions(min_value=0, max_value=20, max_denominator=9)),
    )

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(BinOp, st.sampled_from("+-*/"), children, children),
            st.builds(Pow, children, st.integers(-3, 5)),
            st.builds(Call, st.sampled_from(["exp", "log"]), children),
        )

    return st.recursive(leaves, extend, max_leaves=12)


def _op_trees():
    leaves = st.one_of(
        st.sampled_from([Atom(a) for a in ("X", "D", "UP", "DP", "G", "GINV", "THETA", "ID")]),
        st.builds(Num, st.fractions(min_value=0, max_value=20, max_denominator=9)),
    )

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(BinOp, st.sampled_from("+-*"), children, children),
            st.builds(Pow, children, st.integers(0, 4)),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@given(_series_trees())
def test_series_round_trip(tree):
    text = to_text(tree)
    assert parse_series(text).node == tree
    assert to_text(parse_series(text).node) == text


@given(_op_trees())
def test_operator_round_trip(tree):
    assert parse_op(to_text(tree)).node == tree


@pytest.mark.parametrize(
    "text",
    ["y + 1/2 * y^2", "exp(y) - 1", "-(y - 1)^2", "(1/2)^3", "(y^2)^3", "y - (y - 1)", "y / (2 * y)", "-y^-2"],
)
def test_fixed_round_trips(text):
    assert to_text(parse_series(text).node) == text
