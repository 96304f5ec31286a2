"""Exact scalars, polynomials in x, and truncated power series.

``Rat`` is ``fractions.Fraction``. ``XPoly`` is a dense polynomial over the
rationals. ``YSeries`` is a truncated power series whose coefficients are
either rationals or ``XPoly`` values. ``BiSeries`` is the dense bivariate
workhorse used wherever a series has polynomial (or truncated-series)
coefficients and speed matters; its products go through the kernels.

Binary operations truncate to the smaller operand order. Reading or asking
for a coefficient above the known order raises ``OrderExhausted`` instead of
inventing zeros.
"""

from fractions import Fraction
from math import factorial

from umbra._backend import conv, conv2
from umbra.errors import (
    BadConstantTerm,
    BadLowestTerms,
    NonUnitDivisor,
    NonzeroConstantTerm,
    OrderExhausted,
    SeriesError,
)

Rat = Fraction
NEG_INF = float("-inf")

_ZERO = Fraction(0)
_ONE = Fraction(1)


def rat(value):
    if type(value) is Fraction:
        return value
    if isinstance(value, (list, tuple)):
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(value)


def rat_to_json(r):
    r = rat(r)
    return [str(r.numerator), str(r.denominator)]


def rat_from_json(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"rational must be a [num, den] pair, got {value!r}")
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(value)


def rat_str(r):
    r = rat(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


# ---------------------------------------------------------------------------
# polynomials in x


class XPoly:
    """Dense polynomial over the rationals, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if type(c) is Fraction else Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c):
        return cls([c])

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def __len__(self):
        return len(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, XPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return XPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return XPoly([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return XPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, XPoly):
            if not self.coeffs or not other.coeffs:
                return XPoly()
            return XPoly(conv(self.coeffs, other.coeffs, -1))
        if isinstance(other, (int, Fraction)):
            return XPoly([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return XPoly([c / scalar for c in self.coeffs])
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == XPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("XPoly", self.coeffs))

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self):
        return XPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def mul_x(self, k=1):
        if not self.coeffs:
            return self
        return XPoly([0] * k + list(self.coeffs))

    def divmod(self, other):
        """Long division ``self = q * other + r`` with ``deg r < deg other``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        quot = [_ZERO] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if not c:
                continue
            c = c / lead
            quot[k - d] = c
            for i, b in enumerate(other.coeffs):
                rem[k - d + i] -= c * b
        return XPoly(quot), XPoly(rem[:d] if d > 0 else [])

    def __repr__(self):
        return f"XPoly({self})"

    def __str__(self):
        return poly_str(self.coeffs, "x")

    def to_json(self):
        return {"var": "x", "coeffs": [rat_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls([rat_from_json(c) for c in obj["coeffs"]])


X = XPoly([0, 1])


def poly_str(coeffs, var, ascending=False):
    terms = []
    order = range(len(coeffs)) if ascending else range(len(coeffs) - 1, -1, -1)
    for k in order:
        c = coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = rat_str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{rat_str(mag)}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def deriv_x(p):
    """d/dx of an ``XPoly`` (or coefficientwise on a ``YSeries`` of them)."""
    if isinstance(p, YSeries):
        return YSeries([c.deriv() for c in p.coeffs], p.order, p.var)
    if isinstance(p, BiSeries):
        if p.inner != "x":
            return p.deriv_outer()
        return p.deriv_inner()
    return p.deriv()


def apply_series_in_D(series, poly):
    """Apply ``g(D) = sum_k g_k D^k`` to a polynomial; needs order >= deg."""
    deg = poly.degree()
    if deg == NEG_INF:
        return XPoly()
    if series.order < deg:
        raise OrderExhausted(f"series of order {series.order} cannot act on degree {deg}")
    acc = XPoly()
    term = poly
    for k in range(deg + 1):
        if series.coeffs[k]:
            acc = acc + term * series.coeffs[k]
        term = term.deriv()
    return acc


# ---------------------------------------------------------------------------
# truncated series


def _is_unit(c):
    if isinstance(c, XPoly):
        return c.degree() == 0
    return c != 0


def _unit_inverse(c):
    if isinstance(c, XPoly):
        return _ONE / c.coeffs[0]
    return _ONE / c


class YSeries:
    """Truncated power series ``sum_{k<=order} c_k var^k``.

    Coefficients are ``Fraction`` or ``XPoly``; a series is homogeneous in
    its coefficient ring.
    """

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs, order=None, var="y"):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise OrderExhausted("series order must be non-negative")
        poly = any(isinstance(c, XPoly) for c in cs)
        if poly:
            cs = [c if isinstance(c, XPoly) else XPoly([c]) for c in cs[: order + 1]]
            zero = XPoly()
        else:
            cs = [c if type(c) is Fraction else Fraction(c) for c in cs[: order + 1]]
            zero = _ZERO
        cs.extend([zero] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.order = order
        self.var = var

    @classmethod
    def zero(cls, order, var="y"):
        return cls([], order, var)

    @classmethod
    def one(cls, order, var="y"):
        return cls([1], order, var)

    @classmethod
    def gen(cls, order, var="y"):
        """The series ``var`` itself."""
        return cls([0, 1], order, var)

    @property
    def is_poly_ring(self):
        return bool(self.coeffs) and isinstance(self.coeffs[0], XPoly)

    def _zero(self):
        return XPoly() if self.is_poly_ring else _ZERO

    def __getitem__(self, k):
        if k > self.order:
            raise OrderExhausted(f"coefficient {k} requested from series of order {self.order}")
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order):
        if order > self.order:
            raise OrderExhausted(f"cannot raise order {self.order} to {order}")
        return YSeries(self.coeffs[: order + 1], order, self.var)

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def shift_down(self, k):
        """Divide by ``var^k``; the lowest ``k`` coefficients must vanish."""
        if k == 0:
            return self
        if any(self.coeffs[:k]):
            raise SeriesError(f"series has valuation below {k}; cannot divide by {self.var}^{k}")
        return YSeries(self.coeffs[k:], self.order - k, self.var)

    def shift_up(self, k):
        return YSeries([self._zero()] * k + list(self.coeffs), self.order + k, self.var)

    def is_unit(self):
        return _is_unit(self.coeffs[0])

    def _coerce(self, other):
        if isinstance(other, YSeries):
            return other
        if isinstance(other, (int, Fraction, XPoly)):
            return YSeries([other], self.order, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = min(self.order, other.order)
        return YSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return YSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, YSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Fraction, XPoly)):
            return YSeries([c * other for c in self.coeffs], self.order, self.var)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, XPoly)):
            return YSeries([other * c for c in self.coeffs], self.order, self.var)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, YSeries):
            return series_div(self, other)
        if isinstance(other, (int, Fraction)):
            return YSeries([c / other for c in self.coeffs], self.order, self.var)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return series_div(YSeries.one(self.order, self.var), self ** (-k))
        acc = YSeries.one(self.order, self.var)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, YSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("YSeries", self.order, self.coeffs))

    def __repr__(self):
        return f"YSeries({self})"

    def __str__(self):
        if self.is_poly_ring:
            parts = [f"({c})*{self.var}^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
            body = " + ".join(parts) if parts else "0"
        else:
            body = poly_str(self.coeffs, self.var, ascending=True)
        return f"{body} + O({self.var}^{self.order + 1})"

    def to_json(self):
        if self.is_poly_ring:
            coeffs = [c.to_json() for c in self.coeffs]
        else:
            coeffs = [rat_to_json(c) for c in self.coeffs]
        return {"var": self.var, "order": self.order, "coeffs": coeffs}

    @classmethod
    def from_json(cls, obj):
        coeffs = [
            XPoly.from_json(c) if isinstance(c, dict) else rat_from_json(c) for c in obj["coeffs"]
        ]
        return cls(coeffs, int(obj["order"]), obj.get("var", "y"))


def series_mul(a, b):
    """Cauchy product truncated to ``min(a.order, b.order)``."""
    n = min(a.order, b.order)
    if a.is_poly_ring or b.is_poly_ring:
        rows_a = [c.coeffs if isinstance(c, XPoly) else (c,) for c in a.coeffs]
        rows_b = [c.coeffs if isinstance(c, XPoly) else (c,) for c in b.coeffs]
        rows = conv2(rows_a, rows_b, n, -1)
        return YSeries([XPoly(r) for r in rows], n, a.var)
    return YSeries(conv(a.coeffs, b.coeffs, n), n, a.var)


def series_div(a, b):
    """``q`` with ``q * b == a`` to order ``min(a.order, b.order)``."""
    if not _is_unit(b.coeffs[0]):
        raise NonUnitDivisor(f"divisor constant term {b.coeffs[0]} is not invertible; shift first")
    n = min(a.order, b.order)
    inv = _unit_inverse(b.coeffs[0])
    q = []
    for k in range(n + 1):
        s = a.coeffs[k]
        for j in range(k):
            s = s - q[j] * b.coeffs[k - j]
        q.append(s * inv)
    return YSeries(q, n, a.var)


def series_inverse(b):
    return series_div(YSeries.one(b.order, b.var), b)


def series_compose(outer, inner):
    """``outer(inner(y))``; ``inner`` must have zero constant term."""
    if inner.coeffs[0]:
        raise NonzeroConstantTerm("inner series of a composition must have zero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    acc = YSeries([outer.coeffs[n]], n, outer.var)
    for k in range(n - 1, -1, -1):
        acc = acc * inner + outer.coeffs[k]
    return acc


def series_revert(f):
    """Compositional inverse of ``f`` in ``y + y^2 Q[[y]]`` by Newton iteration.

    Each step doubles the number of correct coefficients:
    ``phi <- phi - (f(phi) - y) / f'(phi)``.
    """
    if f.order < 1 or f.coeffs[0] != 0 or f.coeffs[1] != 1:
        raise BadLowestTerms("reversion needs f = y + O(y^2)")
    n = f.order
    y = YSeries.gen(n, f.var)
    phi = YSeries.gen(1, f.var)
    prec = 1
    df = deriv_y(f)
    while prec < n:
        prec = min(2 * prec, n)
        phi = YSeries(phi.coeffs, prec, f.var)
        residual = series_compose(f.truncate(prec), phi) - y.truncate(prec)
        slope = series_compose(df.truncate(prec - 1), phi.truncate(prec - 1))
        # residual = O(y^2), so one power of y can be pulled out before dividing
        phi = phi - series_div(residual.shift_down(1), slope).shift_up(1)
    return YSeries(phi.coeffs, n, f.var)


def series_exp(a):
    """Formal exponential; ``a`` must have zero constant term."""
    if a.coeffs[0]:
        raise BadConstantTerm("exp needs a series with zero constant term")
    n = a.order
    out = [XPoly([1]) if a.is_poly_ring else _ONE]
    for k in range(1, n + 1):
        s = a.coeffs[1] * out[k - 1]
        for j in range(2, k + 1):
            if a.coeffs[j]:
                s = s + (j * a.coeffs[j]) * out[k - j]
        out.append(s * Fraction(1, k) if k > 1 else s)
    return YSeries(out, n, a.var)


def series_log(a):
    """Formal logarithm; ``a`` must have constant term 1."""
    if a.coeffs[0] != 1:
        raise BadConstantTerm("log needs a series with constant term 1")
    n = a.order
    zero = a._zero()
    out = [zero]
    for k in range(1, n + 1):
        s = a.coeffs[k] * k
        for j in range(1, k):
            s = s - (j * out[j]) * a.coeffs[k - j]
        out.append(s * Fraction(1, k))
    return YSeries(out, n, a.var)


def zero_derivative_L(g):
    """``(g(y) - g(0)) / y``: drops the constant and shifts down one place."""
    if g.order < 1:
        raise OrderExhausted("L needs a series of order >= 1")
    return YSeries(g.coeffs[1:], g.order - 1, g.var)


def deriv_y(g):
    if isinstance(g, BiSeries):
        return g.deriv_outer() if g.outer == "y" else g.deriv_inner()
    if g.order < 1:
        raise OrderExhausted("derivative needs a series of order >= 1")
    return YSeries([k * c for k, c in enumerate(g.coeffs)][1:], g.order - 1, g.var)


def exp_series(order, var="y", scale=1):
    """``exp(scale * var)`` to the given order."""
    scale = rat(scale)
    return YSeries([scale**k / factorial(k) for k in range(order + 1)], order, var)


# ---------------------------------------------------------------------------
# bivariate series


def _trim(row):
    row = list(row)
    while row and not row[-1]:
        row.pop()
    return tuple(row)


class BiSeries:
    """Dense bivariate series ``sum_k row_k(inner) * outer^k``.

    With ``inner_order=None`` the rows are exact polynomials in the inner
    variable (the ring ``Q[x][[y]]``). With an integer ``inner_order`` the rows
    are truncated series in the inner variable; that mode is used when the
    roles of x and y are swapped.
    """

    __slots__ = ("rows", "order", "inner_order", "outer", "inner")

    def __init__(self, rows, order=None, inner_order=None, outer="y", inner="x"):
        rows = [tuple(r.coeffs) if isinstance(r, (XPoly, YSeries)) else tuple(r) for r in rows]
        if order is None:
            order = len(rows) - 1
        if order < 0:
            raise OrderExhausted("series order must be non-negative")
        rows = rows[: order + 1]
        rows.extend([()] * (order + 1 - len(rows)))
        fixed = []
        for r in rows:
            r = tuple(c if type(c) is Fraction else Fraction(c) for c in r)
            if inner_order is None:
                r = _trim(r)
            else:
                r = r[: inner_order + 1] + (_ZERO,) * (inner_order + 1 - len(r))
            fixed.append(r)
        self.rows = tuple(fixed)
        self.order = order
        self.inner_order = inner_order
        self.outer = outer
        self.inner = inner

    @property
    def exact(self):
        return self.inner_order is None

    def _like(self, rows, order=None, inner_order="same"):
        return BiSeries(
            rows,
            self.order if order is None else order,
            self.inner_order if inner_order == "same" else inner_order,
            self.outer,
            self.inner,
        )

    @classmethod
    def from_yseries(cls, s, inner="x"):
        return cls([c.coeffs if isinstance(c, XPoly) else (c,) for c in s.coeffs], s.order, None, s.var, inner)

    def to_yseries(self):
        if not self.exact:
            raise SeriesError("only exact bivariate series convert to YSeries<XPoly>")
        return YSeries([XPoly(r) for r in self.rows], self.order, self.outer)

    def row(self, k):
        if k > self.order:
            raise OrderExhausted(f"row {k} requested from series of order {self.order}")
        if self.exact:
            return XPoly(self.rows[k])
        return YSeries(self.rows[k], self.inner_order, self.inner)

    def coeff(self, outer_k, inner_k):
        r = self.rows[outer_k] if outer_k <= self.order else None
        if r is None:
            raise OrderExhausted(f"row {outer_k} beyond order {self.order}")
        if not self.exact and inner_k > self.inner_order:
            raise OrderExhausted(f"inner degree {inner_k} beyond order {self.inner_order}")
        return r[inner_k] if inner_k < len(r) else _ZERO

    def row_degree(self, k):
        r = _trim(self.rows[k])
        return len(r) - 1 if r else NEG_INF

    def inner_bound(self):
        """Largest inner degree carried by any row."""
        return max((self.row_degree(k) for k in range(self.order + 1)), default=NEG_INF)

    def _merge_inner(self, other):
        if self.exact and other.exact:
            return None
        if self.exact:
            return other.inner_order
        if other.exact:
            return self.inner_order
        return min(self.inner_order, other.inner_order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._like([(other,)])
        n = min(self.order, other.order)
        rows = []
        for ra, rb in zip(self.rows[: n + 1], other.rows[: n + 1]):
            if len(ra) < len(rb):
                ra, rb = rb, ra
            rows.append([x + rb[i] if i < len(rb) else x for i, x in enumerate(ra)])
        return self._like(rows, n, self._merge_inner(other))

    __radd__ = __add__

    def __neg__(self):
        return self._like([[-c for c in r] for r in self.rows])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return self + (-other)

    def scale(self, c):
        c = rat(c)
        return self._like([[c * v for v in r] for r in self.rows])

    def scale_rows(self, factors):
        """Multiply row ``k`` by ``factors[k]``."""
        return self._like([[rat(f) * v for v in r] for r, f in zip(self.rows, factors)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        n = min(self.order, other.order)
        m = self._merge_inner(other)
        rows = conv2(self.rows, other.rows, n, -1 if m is None else m)
        return self._like(rows, n, m)

    __rmul__ = __mul__

    def _row_unit_inverse(self, row):
        if self.exact:
            r = _trim(row)
            if len(r) != 1:
                raise NonUnitDivisor("constant row of the divisor must be a nonzero rational")
            return (_ONE / r[0],)
        if not row[0]:
            raise NonUnitDivisor("constant row of the divisor is not a unit series")
        inv = series_inverse(YSeries(row, self.inner_order, self.inner))
        return inv.coeffs

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(_ONE / rat(other))
        n = min(self.order, other.order)
        m = self._merge_inner(other)
        work = other._like(other.rows, other.order, m)
        inv0 = work._row_unit_inverse(work.rows[0])
        mm = -1 if m is None else m
        q = []
        for k in range(n + 1):
            s = list(self.rows[k])
            for j in range(k):
                if not q[j] or not work.rows[k - j]:
                    continue
                prod = conv(q[j], work.rows[k - j], mm)
                if len(s) < len(prod):
                    s.extend([_ZERO] * (len(prod) - len(s)))
                for i, v in enumerate(prod):
                    s[i] -= v
            if m is not None:
                s = s[: m + 1]
            q.append(_trim(conv(s, inv0, mm)) if any(s) else ())
        return self._like(q, n, m)

    def deriv_outer(self):
        if self.order < 1:
            raise OrderExhausted("derivative needs order >= 1")
        rows = [[k * c for c in self.rows[k]] for k in range(1, self.order + 1)]
        return self._like(rows, self.order - 1)

    def deriv_inner(self):
        rows = [[k * c for k, c in enumerate(r)][1:] for r in self.rows]
        return self._like(rows, None, None if self.exact else self.inner_order - 1)

    def L_outer(self):
        """Zero-derivative in the outer variable."""
        if self.order < 1:
            raise OrderExhausted("L needs order >= 1")
        return self._like(self.rows[1:], self.order - 1)

    def shift_outer_down(self, k=1):
        if any(any(r) for r in self.rows[:k]):
            raise SeriesError(f"cannot divide by {self.outer}^{k}: low rows are nonzero")
        return self._like(self.rows[k:], self.order - k)

    def shift_outer_up(self, k=1):
        return self._like([()] * k + list(self.rows), self.order + k)

    def shift_inner_down(self, k=1):
        if any(any(r[:k]) for r in self.rows):
            raise SeriesError(f"cannot divide by {self.inner}^{k}: low coefficients are nonzero")
        return self._like(
            [r[k:] for r in self.rows], None, None if self.exact else self.inner_order - k
        )

    def shift_inner_up(self, k=1):
        return self._like([(_ZERO,) * k + r if any(r) else () for r in self.rows])

    def truncate(self, order):
        if order > self.order:
            raise OrderExhausted(f"cannot raise order {self.order} to {order}")
        return self._like(self.rows[: order + 1], order)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        if self.order != other.order or self.inner_order != other.inner_order:
            return False
        return all(_trim(a) == _trim(b) for a, b in zip(self.rows, other.rows))

    def __hash__(self):
        return hash(("BiSeries", self.order, self.inner_order, tuple(_trim(r) for r in self.rows)))

    def __repr__(self):
        return f"BiSeries(order={self.order}, inner_order={self.inner_order}, rows={len(self.rows)})"

    def to_json(self):
        return {
            "var": self.outer,
            "inner": self.inner,
            "order": self.order,
            "inner_order": self.inner_order,
            "rows": [[rat_to_json(c) for c in _trim(r)] for r in self.rows],
        }

    @classmethod
    def from_json(cls, obj):
        rows = [[rat_from_json(c) for c in r] for r in obj["rows"]]
        return cls(rows, obj["order"], obj.get("inner_order"), obj.get("var", "y"), obj.get("inner", "x"))


def exp_xy(order):
    """Truncated ``e^{xy}`` as an exact bivariate series in ``Q[x][[y]]``."""
    return BiSeries([[0] * k + [Fraction(1, factorial(k))] for k in range(order + 1)], order)
