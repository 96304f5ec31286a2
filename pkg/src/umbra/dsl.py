"""Small expression languages for series in ``y`` and for operators.

Series::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUM | 'y' | ('exp' | 'log') '(' expr ')' | '(' expr ')'

``NUM`` is an integer or a rational literal ``p/q`` written without spaces.
Operators use the same shape with the atoms ``X D UP DP G GINV THETA ID``;
a product ``A*B`` is the composition ``A(B(.))`` and exponents must be
non-negative. An identity is ``expr == expr``.

Parse errors carry the byte offset of the offending token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from umbra.errors import DSLSyntaxError, NonUnitDivisor, UnknownAtom
from umbra.series import YSeries, rat_str, series_div, series_exp, series_log

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+/\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>==|[-+*/^()]))"
)

SERIES_FUNCS = ("exp", "log")
OP_ATOMS = ("X", "D", "UP", "DP", "G", "GINV", "THETA", "ID")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    offset: int


def tokenize(text):
    tokens = []
    pos = 0
    raw = text.encode()
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            start = pos + len(rest) - len(rest.lstrip())
            raise DSLSyntaxError(f"unexpected character {text[start]!r}", _byte_offset(text, start))
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), _byte_offset(text, m.start(kind))))
        pos = m.end()
    tokens.append(Token("end", "", len(raw)))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode())


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


@dataclass(frozen=True)
class Equation:
    lhs: object
    rhs: object


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text, atoms, funcs, negative_powers):
        self.tokens = tokenize(text)
        self.i = 0
        self.atoms = atoms
        self.funcs = funcs
        self.negative_powers = negative_powers

    @property
    def tok(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.next()
        if t.text != text:
            raise DSLSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.offset)
        return t

    def finish(self, node):
        if self.tok.kind != "end":
            raise DSLSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.next().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.text == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text != "^":
            return base
        self.next()
        sign = 1
        if self.tok.text == "-":
            if not self.negative_powers:
                raise DSLSyntaxError("operator powers must be non-negative", self.tok.offset)
            self.next()
            sign = -1
        t = self.next()
        if t.kind != "num" or "/" in t.text:
            raise DSLSyntaxError("exponent must be an integer", t.offset)
        return Pow(base, sign * int(t.text))

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return Num(Fraction(t.text))
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            if t.text in self.funcs:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in self.atoms:
                return Atom(t.text)
            raise UnknownAtom(f"unknown name {t.text!r}", t.offset)
        raise DSLSyntaxError(f"unexpected {t.text or 'end of input'!r}", t.offset)


def parse_series(text):
    p = _Parser(text, ("y",), SERIES_FUNCS, True)
    return SeriesExpr(p.finish(p.expr()))


def parse_op(text):
    p = _Parser(text, OP_ATOMS, (), False)
    return OpExpr(p.finish(p.expr()))


def parse_identity(text):
    """``LHS == RHS`` for operators."""
    p = _Parser(text, OP_ATOMS, (), False)
    lhs = p.expr()
    p.expect("==")
    rhs = p.finish(p.expr())
    return Equation(OpExpr(lhs), OpExpr(rhs))


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node):
    """Text that parses back to the same tree."""
    return _show(node, 0)


def _show(node, ctx):
    if isinstance(node, Num):
        return rat_str(node.value)
    if isinstance(node, Atom):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_show(node.arg, 0)})"
    if isinstance(node, Neg):
        out = "-" + _show(node.arg, 3)
        return f"({out})" if ctx > 2 else out
    if isinstance(node, Pow):
        base = _show(node.base, 4)
        if isinstance(node.base, Pow) or (
            isinstance(node.base, Num) and node.base.value.denominator != 1
        ):
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        # left-associative: the right operand needs parentheses at equal precedence
        out = f"{_show(node.left, prec)} {node.op} {_show(node.right, prec + 1)}"
        return f"({out})" if prec < ctx else out
    if isinstance(node, Equation):
        return f"{_show(node.lhs.node, 0)} == {_show(node.rhs.node, 0)}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class SeriesExpr:
    node: object

    def __str__(self):
        return to_text(self.node)

    def evaluate(self, order):
        """The series to ``y^order``."""
        return _eval_series(self.node, order)


def _eval_series(node, order):
    if isinstance(node, Num):
        return YSeries([node.value], order)
    if isinstance(node, Atom):
        return YSeries.gen(order)
    if isinstance(node, Neg):
        return -_eval_series(node.arg, order)
    if isinstance(node, Call):
        arg = _eval_series(node.arg, order)
        return series_exp(arg) if node.func == "exp" else series_log(arg)
    if isinstance(node, Pow):
        if node.exp >= 0:
            return _eval_series(node.base, order) ** node.exp
        return _divide(Num(Fraction(1)), Pow(node.base, -node.exp), order)
    if node.op == "/":
        return _divide(node.left, node.right, order)
    a = _eval_series(node.left, order)
    b = _eval_series(node.right, order)
    return {"+": a + b, "-": a - b}[node.op] if node.op != "*" else a * b


def _divide(num, den, order):
    b = _eval_series(den, order)
    v = b.valuation()
    if v is None:
        raise ZeroDivisionError("division by a zero series")
    if v == 0:
        return series_div(_eval_series(num, order), b)
    # y^v divides the denominator: work v orders higher and cancel
    a = _eval_series(num, order + v)
    b = _eval_series(den, order + v)
    lo = a.valuation()
    if lo is not None and lo < v:
        raise NonUnitDivisor(f"numerator is not divisible by y^{v}")
    return series_div(a.shift_down(v), b.shift_down(v))


@dataclass(frozen=True)
class OpExpr:
    node: object

    def __str__(self):
        return to_text(self.node)

    def evaluate(self, fam):
        """Matrix on ``x^0..x^N`` for the family ``fam``."""
        from umbra import opcalc

        atoms = {
            "X": lambda: opcalc.op_X(fam.N),
            "D": lambda: opcalc.op_D(fam.N),
            "THETA": lambda: opcalc.op_theta(fam.N),
            "ID": lambda: opcalc.identity(fam.N),
            "UP": lambda: opcalc.op_U(fam),
            "DP": lambda: opcalc.op_DP(fam),
            "G": lambda: opcalc.op_G(fam),
            "GINV": lambda: opcalc.op_Ginv(fam),
        }
        cache = {}

        def atom(name):
            if name not in cache:
                cache[name] = atoms[name]()
            return cache[name]

        value = _eval_op(self.node, atom)
        if isinstance(value, Fraction):
            return opcalc.identity(fam.N) * value
        return value


def _eval_op(node, atom):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Atom):
        return atom(node.name)
    if isinstance(node, Neg):
        return -_eval_op(node.arg, atom)
    if isinstance(node, Pow):
        base = _eval_op(node.base, atom)
        return base**node.exp
    left = _eval_op(node.left, atom)
    right = _eval_op(node.right, atom)
    if node.op == "/":
        if not isinstance(right, Fraction):
            raise ValueError("operators can only be divided by scalars")
        return left * (1 / right)
    if node.op == "*":
        return left * right
    return left + right if node.op == "+" else left - right
