"""Logarithmic derivatives of ``p_n`` and ``f*_n`` from the generating function.

For a monic family with ``p_n(0) = 0`` (``n >= 1``) and
``Q = sum_k p_k(x) y^k / k!``::

    (x/n) p_n'/p_n = sum_k (-1/x)^k xi_k(x),
    xi_k = W^k w0 |_{y=0},   W = (x Q / Q_y)(d/dy - n L),
    w0 = (x/y) Q_x / Q_y

where ``L g = (g - g(0)) / y``. Since ``deg xi_k <= k(n-2)/(n-1)``, the
coefficient of ``x^-h`` only involves ``k <= h(n-1)``.

Two engines compute the expansion. ``neumann_xi`` iterates on exact
polynomial coefficients and returns the ``xi_k`` themselves. The graded
engine stores the coefficient of ``y^j`` after ``m`` steps reversed
around the degree bound ``m + j``; in that form every product is causal in
``t = 1/x``, so rows can be cut to ``H + 1`` entries. The coefficient of
``y^j`` in each ratio has degree at most ``j``, which is what keeps the
reversal consistent across products.

The dual statement swaps the roles of ``x`` and ``y``: ``Q = sum x^a
f*_a(y) / a!`` and the same recursion in ``x`` yields ``(y/n) f*_n'/f*_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial

from umbra.errors import InsufficientTable, NotBinomial, OrderExhausted, PreconditionViolated
from umbra.family import vanish_lemma_check
from umbra.series import (
    BiSeries,
    XPoly,
    YSeries,
    deriv_y,
    rat_to_json,
    series_div,
    series_revert,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class InverseXExpansion:
    """Coefficients of ``x^0, x^-1, ..., x^-H``."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if self.coeffs and self.coeffs[0] != 1:
            raise ValueError(f"leading coefficient must be 1, got {self.coeffs[0]}")

    @property
    def H(self):
        return len(self.coeffs) - 1

    def __getitem__(self, h):
        return self.coeffs[h]

    def __len__(self):
        return len(self.coeffs)

    def to_json(self):
        return [rat_to_json(c) for c in self.coeffs]


# ---------------------------------------------------------------------------
# context


@dataclass(frozen=True, eq=False)
class LogDerivContext:
    """The ratio series of ``Q`` for one family, exact in ``Q[x][[y]]``."""

    fam: object
    Q: BiSeries
    Qx: BiSeries
    Qy: BiSeries
    W_ratio: BiSeries
    w0: BiSeries

    @property
    def order(self):
        return min(self.W_ratio.order, self.w0.order)

    def ell(self, k):
        return self.W_ratio.row(k)

    def m(self, k):
        return self.w0.row(k)

    @cached_property
    def h_series(self):
        """``(1/x) Q_y / Q``, whose ``y^k`` coefficient is ``h_k``."""
        return (self.Qy / self.Q.truncate(self.Qy.order)).shift_inner_down(1)

    @cached_property
    def d_series(self):
        """``(1/y) Q_x / Q``, whose ``y^k`` coefficient is ``d_k``."""
        return self.Qx.shift_outer_down(1) / self.Q.truncate(self.Qx.order - 1)


def _require_vanishing(fam):
    if not vanish_lemma_check(fam).f0_is_one:
        bad = next(n for n in range(1, fam.table_size + 1) if fam.polys[n][0] != 0)
        raise PreconditionViolated(f"p_{bad}(0) = {fam.polys[bad][0]}, need p_n(0) = 0 for n >= 1")


def build_context(fam, order=None):
    """Exact ``x Q / Q_y`` and ``(x/y) Q_x / Q_y`` to ``y^order``.

    ``order`` defaults to ``N``; it is capped by the table (``Q_y`` at
    order ``k`` reads ``p_(k+1)``).
    """
    _require_vanishing(fam)
    top = fam.table_size - 1
    order = min(fam.N, top) if order is None else order
    if order > top:
        raise InsufficientTable(f"context of order {order} needs p up to index {order + 1}")
    if order < 0:
        raise InsufficientTable("context needs at least p_0 and p_1")
    size = order + 1
    Q = BiSeries(
        [[c / factorial(k) for c in fam.polys[k].coeffs] for k in range(size + 1)], size
    )
    Qx = BiSeries([[c / factorial(k) for c in fam.polys[k].deriv().coeffs] for k in range(size + 1)], size)
    Qy = Q.deriv_outer()
    W_ratio = Q.truncate(order) / Qy.truncate(order).shift_inner_down(1)
    w0 = Qx.shift_outer_down(1).truncate(order) / Qy.truncate(order).shift_inner_down(1)
    for name, s in (("ell", W_ratio), ("m", w0)):
        if s.rows[0] != (_ONE,):
            raise PreconditionViolated(f"{name}_0 must be 1")
        for k in range(1, order + 1):
            if s.row_degree(k) > k - 1:
                raise PreconditionViolated(f"deg {name}_{k} = {s.row_degree(k)} exceeds {k - 1}")
    return LogDerivContext(fam, Q, Qx, Qy, W_ratio, w0)


def _apply_step(ratio, g, n):
    """``ratio * (d/dy - n L) g``; the result is one order shorter than ``g``."""
    dg = g._like([[(j + 1 - n) * c for c in g.rows[j + 1]] for j in range(g.order)], g.order - 1)
    return ratio.truncate(dg.order) * dg


def neumann_xi(ctx, n, K):
    """``xi_0..xi_K`` as exact polynomials in ``x``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if K > ctx.order:
        raise OrderExhausted(f"xi_{K} needs the context to order {K}, have {ctx.order}")
    g = ctx.w0.truncate(K)
    xis = [XPoly(g.rows[0])]
    for _ in range(K):
        g = _apply_step(ctx.W_ratio, g, n)
        xis.append(XPoly(g.rows[0]))
    return xis


def depth_for(n, H):
    """Neumann depth that makes the ``x^-h`` coefficients exact for ``h <= H``."""
    return H * (n - 1)


# ---------------------------------------------------------------------------
# graded engine


def _reversed(p, bound, width):
    """``[x^(bound - s)] p`` for ``s = 0..width - 1``."""
    return [p[bound - s] if bound - s >= 0 else _ZERO for s in range(width)]


def graded_ratios(fam, order, H):
    """``x Q / Q_y`` and ``(x/y) Q_x / Q_y`` with row ``j`` reversed around ``x^j``.

    Needs ``p_0..p_(order+1)``.
    """
    _require_vanishing(fam)
    if order + 1 > fam.table_size:
        raise InsufficientTable(
            f"depth {order} needs p up to index {order + 1}, table stops at {fam.table_size}"
        )
    width = H + 1
    rows_q, rows_qy, rows_qx = [], [], []
    for k in range(order + 1):
        p, p1 = fam.polys[k], fam.polys[k + 1]
        rows_q.append([c / factorial(k) for c in _reversed(p, k, width)])
        # Q_y / x at y^k is p_(k+1) / (x k!); Q_x / y at y^k is p_(k+1)' / (k+1)!
        rows_qy.append([c / factorial(k) for c in _reversed(p1, k + 1, width)])
        rows_qx.append([c / factorial(k + 1) for c in _reversed(p1.deriv(), k, width)])
    q = BiSeries(rows_q, order, H, "y", "t")
    qy = BiSeries(rows_qy, order, H, "y", "t")
    qx = BiSeries(rows_qx, order, H, "y", "t")
    return q / qy, qx / qy


def graded_xi_tops(fam, n, K, H):
    """``[x^(k-h)] xi_k`` for ``k = 0..K`` and ``h = 0..H``."""
    W, g = graded_ratios(fam, K, H)
    tops = [g.rows[0]]
    for _ in range(K):
        g = _apply_step(W, g, n)
        tops.append(g.rows[0])
    return tops


def assemble_expansion(ctx, n, H, K=None, engine="graded"):
    """Coefficients of ``x^0..x^-H`` in ``(x/n) p_n'/p_n``.

    ``K`` defaults to ``H(n-1)``; a larger value must not change the result.
    ``engine="exact"`` reads the coefficients off ``neumann_xi`` instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    K = depth_for(n, H) if K is None else K
    out = [_ZERO] * (H + 1)
    if engine == "graded":
        for k, top in enumerate(graded_xi_tops(ctx.fam, n, K, H)):
            sign = -1 if k % 2 else 1
            for h in range(H + 1):
                if top[h]:
                    out[h] += sign * top[h]
    elif engine == "exact":
        for k, xi in enumerate(neumann_xi(ctx, n, K)):
            sign = -1 if k % 2 else 1
            for h in range(min(k, H) + 1):
                out[h] += sign * xi[k - h]
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return InverseXExpansion(n, out)


def oracle_logderiv(fam, n, H):
    """``x p_n' / (n p_n)`` in descending powers of ``x`` by long division."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = fam.polys[n]
    if p.is_zero():
        raise ValueError(f"p_{n} is zero")
    d = p.degree()
    num = p.deriv().mul_x() / n
    # with t = 1/x both sides become power series in t
    a = [num[d - s] if d - s >= 0 else _ZERO for s in range(H + 1)]
    b = [p[d - s] if d - s >= 0 else _ZERO for s in range(H + 1)]
    lead = b[0]
    c = []
    for h in range(H + 1):
        s = a[h]
        for i in range(1, h + 1):
            s -= b[i] * c[h - i]
        c.append(s / lead)
    return InverseXExpansion(n, c)


def binomial_closed_form(fam, n, H):
    """The binomial case, where every ``xi_k`` is a constant.

    With ``Q = exp(x phi(y))`` the ratios are ``1/phi'`` and
    ``phi / (y phi')``, so ``c_h = (-1)^h [V^h g]_{y=0}`` with
    ``V = (1/phi')(d/dy - n L)``.
    """
    if fam.f is None:
        raise NotBinomial(f"{fam.name} carries no series f")
    if n < 1:
        raise ValueError("n must be >= 1")
    if fam.f.order < H + 1:
        raise OrderExhausted(f"f of order {fam.f.order} cannot give {H} coefficients")
    phi = series_revert(fam.f.truncate(H + 1))
    dphi = deriv_y(phi)
    g = series_div(phi.shift_down(1), dphi.truncate(H))
    inv = series_div(YSeries.one(H), dphi.truncate(H))
    out = [g.coeffs[0]]
    for h in range(1, H + 1):
        dg = YSeries([(j + 1 - n) * g.coeffs[j + 1] for j in range(g.order)], g.order - 1)
        g = inv.truncate(dg.order) * dg
        out.append(-g.coeffs[0] if h % 2 else g.coeffs[0])
    return InverseXExpansion(n, out)


@dataclass(frozen=True)
class DegreeBoundReport:
    n: int
    degrees: tuple
    bounds: tuple

    @property
    def ok(self):
        return all(d <= b for d, b in zip(self.degrees, self.bounds))

    def violations(self):
        return [(M, d, b) for M, (d, b) in enumerate(zip(self.degrees, self.bounds)) if d > b]


def degree_bound(n, M):
    if n == 1:
        return 0 if M == 0 else float("-inf")
    return M * (n - 2) // (n - 1)


def degree_bound_check(ctx, n, K):
    """Compare ``deg xi_M`` with ``floor(M(n-2)/(n-1))`` for ``M = 0..K``.

    For ``n = 1`` the bound is "zero polynomial" beyond ``M = 0``.
    """
    xis = neumann_xi(ctx, n, K)
    return DegreeBoundReport(n, tuple(x.degree() for x in xis), tuple(degree_bound(n, M) for M in range(K + 1)))


# ---------------------------------------------------------------------------
# dual formula


@dataclass(frozen=True)
class DualExpansion:
    """``(y/n) f*_n'/f*_n`` to ``y^H``, from the engine and from direct division."""

    n: int
    coeffs: tuple
    direct: tuple
    psi_valuations: tuple

    @property
    def match(self):
        return self.coeffs == self.direct

    @property
    def nonnegative(self):
        """No ``psi_k`` contributes a negative power of ``y``."""
        return all(v is None or v >= k for k, v in enumerate(self.psi_valuations))

    def to_json(self):
        return {
            "n": self.n,
            "H": len(self.coeffs) - 1,
            "engine": [rat_to_json(c) for c in self.coeffs],
            "direct": [rat_to_json(c) for c in self.direct],
            "match": self.match,
            "psi_valuations": list(self.psi_valuations),
        }


def _valuation(row):
    return next((i for i, c in enumerate(row) if c), None)


def series_family_logderiv(F, n, H, K=None):
    """``(y/n) g_n'/g_n`` from ``F = sum_a x^a g_a(y) / a!``.

    ``F`` is a ``BiSeries`` with outer variable ``x`` and truncated inner
    series in ``y``; ``g_0 = 1`` and ``g_a in y^a + y^(a+1) Q[[y]]`` are
    required. The ``g_a`` need not be polynomials. Returns the coefficient
    list and the valuations of ``psi_0..psi_K``.
    """
    if F.exact:
        raise ValueError("the role-swapped engine needs truncated inner series")
    K = depth_for(n, H) if K is None else K
    if tuple(F.rows[0][:1]) != (_ONE,) or any(F.rows[0][1:]):
        raise PreconditionViolated("g_0 must be 1")
    if F.order < K + 1:
        raise OrderExhausted(f"depth {K} needs x-order {K + 1}, have {F.order}")
    My = H + K
    if F.inner_order < My + 1:
        raise OrderExhausted(f"y-order {F.inner_order} is below the required {My + 1}")
    F = F.truncate(K + 1)
    Fx = F.deriv_outer()  # d/dx, order K
    Fy = F.deriv_inner()  # d/dy, inner order drops by one
    base = Fx.shift_inner_down(1)  # Q_x / y
    ratio = F.truncate(K) / base  # Q / (Q_x / y) = y Q / Q_x
    g = Fy.shift_outer_down(1) / base  # (y/x) Q_y / Q_x
    ratio = ratio._like(ratio.rows, None, My)
    g = g._like(g.rows, None, My)
    psis = [g.rows[0]]
    for _ in range(K):
        g = _apply_step(ratio, g, n)
        psis.append(g.rows[0])
    out = [_ZERO] * (H + 1)
    for k, psi in enumerate(psis):
        sign = -1 if k % 2 else 1
        for h in range(H + 1):
            if h + k <= My and psi[h + k]:
                out[h] += sign * psi[h + k]
    return tuple(out), tuple(_valuation(p) for p in psis)


def dual_generating_function(fam, x_order, y_order):
    """``Q`` with outer variable ``x``: ``[x^a y^b] Q = [x^a] p_b / b!``."""
    if y_order > fam.table_size:
        raise InsufficientTable(f"y-order {y_order} needs p up to index {y_order}")
    rows = [
        [fam.polys[b][a] / factorial(b) for b in range(y_order + 1)] for a in range(x_order + 1)
    ]
    return BiSeries(rows, x_order, y_order, "x", "y")


def direct_logderiv(fn, n, H):
    """``y fn' / (n fn)`` for ``fn in y^n + ...`` straight from the series."""
    if fn.order < n + H:
        raise OrderExhausted(f"f_{n} of order {fn.order} cannot give {H + 1} coefficients")
    fn = fn.truncate(n + H)
    yd = YSeries([k * c for k, c in enumerate(fn.coeffs)], fn.order)
    r = series_div(yd.shift_down(n), fn.shift_down(n))
    return tuple(c / n for c in r.coeffs)


def dual_fn_logderiv(fam, n, H, K=None):
    """``(y/n) f*_n'/f*_n`` by the role-swapped engine, checked against ``fam.dual``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Q0 = [fam.polys[b][0] for b in range(fam.table_size + 1)]
    if Q0[0] != 1 or any(Q0[1:]):
        raise PreconditionViolated("f*_0 = 1 needs p_n(0) = 0 for all n >= 1")
    K = depth_for(n, H) if K is None else K
    F = dual_generating_function(fam, K + 1, H + K + 1)
    coeffs, vals = series_family_logderiv(F, n, H, K)
    direct = direct_logderiv(fam.dual.fns[n], n, H)
    return DualExpansion(n, coeffs, direct, vals)
