"""Monic polynomial families, their coefficient tables and series families.

A family is stored by its polynomials ``p_0..p_M`` together with

* ``xi[n][k]``: ``p_n = sum_k C(n,k) xi[n][k] x^(n-k)``
* ``xi_star[n][k]``: ``x^n = sum_k C(n,k) xi_star[n][k] p_(n-k)``
* ``fns[n]``: the series ``f_n`` with ``e^(xy) = sum_n p_n(x) f_n(y) / n!``,
  synthesized from ``xi_star`` and known to order ``N_y``.

``N`` is the operator size (matrices act on ``x^0..x^N``); the tables may run
further than ``N`` because series to order ``N_y`` need polynomials up to
index ``N_y``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import comb, factorial
from typing import NamedTuple

from umbra.errors import (
    BadLeadingCoefficient,
    BadValuation,
    InconsistentSystem,
    InsufficientTable,
    LemmaViolation,
    NonzeroRemainder,
    OrderExhausted,
)
from umbra.series import (
    X,
    XPoly,
    YSeries,
    apply_series_in_D,
    deriv_y,
    exp_series,
    rat,
    rat_from_json,
    rat_to_json,
    series_div,
    series_revert,
)

DEFAULT_N = 12
DEFAULT_NY = 16
BUILTINS = ("monomial", "falling", "qexp")


@dataclass(frozen=True, eq=False)
class MonicFamily:
    polys: tuple
    xi: tuple
    xi_star: tuple
    fns: tuple
    N: int
    N_y: int
    name: str = "family"
    f: YSeries | None = field(default=None, repr=False)

    @property
    def max_index(self):
        return self.N

    @property
    def table_size(self):
        """Largest polynomial index held in the tables."""
        return len(self.polys) - 1

    @property
    def is_binomial(self):
        return self.f is not None

    def p(self, n):
        return self.polys[n]

    @cached_property
    def dual(self):
        """The dual family ``p*_n = G_P^{-1} x^n``."""
        return family_from_xi(self.xi_star, N=self.N, N_y=self.N_y, name=f"dual({self.name})")

    def same_as(self, other):
        return (
            self.polys == other.polys
            and self.xi == other.xi
            and self.xi_star == other.xi_star
            and self.fns == other.fns
        )

    def __repr__(self):
        return f"MonicFamily({self.name!r}, N={self.N}, N_y={self.N_y}, table={self.table_size})"

    def to_json(self):
        return {
            "kind": "xi",
            "N": self.N,
            "N_y": self.N_y,
            "data": [[rat_to_json(c) for c in row] for row in self.xi],
        }


# ---------------------------------------------------------------------------
# coefficient tables


def xi_from_polys(polys):
    return tuple(
        tuple(p[n - k] / comb(n, k) for k in range(n + 1)) for n, p in enumerate(polys)
    )


def polys_from_xi(xi_table):
    polys = []
    for n, row in enumerate(xi_table):
        if len(row) < n + 1:
            raise ValueError(f"xi row {n} needs {n + 1} entries, got {len(row)}")
        if rat(row[0]) != 1:
            raise BadLeadingCoefficient(f"xi_0^{n} = {row[0]}, must be 1")
        polys.append(XPoly([comb(n, k) * rat(row[k]) for k in range(n, -1, -1)]))
    return polys


def _coords_in_basis(polys, n):
    """Coordinates ``c`` with ``x^n = sum_m c[m] p_m`` (back substitution)."""
    rem = [Fraction(0)] * n + [Fraction(1)]
    coords = [Fraction(0)] * (n + 1)
    for m in range(n, -1, -1):
        c = rem[m]
        if not c:
            continue
        coords[m] = c
        for i, v in enumerate(polys[m].coeffs):
            rem[i] -= c * v
    return coords


def dual_polys(polys):
    """``p*_n``: the coordinates of ``x^n`` in the basis ``p``."""
    return [XPoly(_coords_in_basis(polys, n)) for n in range(len(polys))]


def dual_xi(xi_table):
    """ξ* table from a ξ table: inverts the unitriangular change of basis."""
    return xi_from_polys(dual_polys(polys_from_xi(xi_table)))


def compute_fn(xi_star, n, N_y):
    """``f_n(y) = sum_k y^(n+k) / k! * xi_star[n+k][k]`` to order ``N_y``."""
    if N_y > len(xi_star) - 1:
        raise InsufficientTable(
            f"f_{n} to order {N_y} needs xi* up to index {N_y}, table stops at {len(xi_star) - 1}"
        )
    coeffs = [Fraction(0)] * (N_y + 1)
    for m in range(n, N_y + 1):
        k = m - n
        coeffs[m] = xi_star[m][k] / factorial(k)
    return YSeries(coeffs, N_y)


# ---------------------------------------------------------------------------
# constructors


def family_from_polys(polys, N=None, N_y=None, name="family", f=None):
    polys = [p if isinstance(p, XPoly) else XPoly(p) for p in polys]
    M = len(polys) - 1
    for n, p in enumerate(polys):
        if p.degree() != n or p.lead != 1:
            raise BadLeadingCoefficient(f"p_{n} = {p} is not monic of degree {n}")
    N = M if N is None else N
    N_y = M if N_y is None else N_y
    if N > M:
        raise InsufficientTable(f"N={N} exceeds the table size {M}")
    xi = xi_from_polys(polys)
    xi_star = xi_from_polys(dual_polys(polys))
    fns = tuple(compute_fn(xi_star, n, N_y) for n in range(M + 1))
    return MonicFamily(tuple(polys), xi, xi_star, fns, N, N_y, name, f)


def family_from_xi(xi_table, N=None, N_y=None, name="xi"):
    return family_from_polys(polys_from_xi(xi_table), N, N_y, name)


def _table_size(N, N_y):
    N = DEFAULT_N if N is None else N
    N_y = DEFAULT_NY if N_y is None else N_y
    return N, N_y, max(N, N_y)


def binomial_from_f(f, N=None, N_y=None, name=None):
    """Binomial family whose series family is ``{f^n}``.

    ``p_n = n! [y^n] exp(x phi(y))`` with ``phi`` the compositional inverse of
    ``f``; expanded as ``sum_k x^k phi^k / k!``.
    """
    N, N_y, M = _table_size(N, N_y)
    if f.order < M:
        raise OrderExhausted(f"series of order {f.order} cannot build a table of size {M}")
    f = f.truncate(M)
    phi = series_revert(f)
    powers = [YSeries.one(M)]
    for _ in range(M):
        powers.append(powers[-1] * phi)
    polys = [
        XPoly([factorial(n) * powers[k].coeffs[n] / factorial(k) for k in range(n + 1)])
        for n in range(M + 1)
    ]
    fam = family_from_polys(polys, N, N_y, name or f"binomial({f})", f)
    power = YSeries.one(N_y)
    ft = f.truncate(N_y)
    for n, fn in enumerate(fam.fns):
        if fn != power:
            raise InconsistentSystem(f"f_{n} does not equal f^{n}")
        power = power * ft
    return fam


def family_from_fns(fns, N=None, N_y=None, name="fns"):
    """Recover ``p_n`` from prescribed series ``f_n in y^n + y^(n+1) Q[[y]]``.

    Matching ``y^k`` in ``e^(xy) = sum p_n f_n / n!`` gives the triangular
    system ``p_k = x^k - sum_{n<k} k!/n! [y^k]f_n p_n``.
    """
    M = len(fns) - 1
    for n, fn in enumerate(fns):
        if fn.order < M:
            raise OrderExhausted(f"f_{n} has order {fn.order}, need {M}")
        if any(fn.coeffs[:n]) or fn.coeffs[n] != 1:
            raise BadValuation(f"f_{n} is not in y^{n} + y^{n + 1}Q[[y]]")
    polys = []
    for k in range(M + 1):
        acc = XPoly.monomial(k)
        for n in range(k):
            c = fns[n].coeffs[k]
            if c:
                acc = acc - polys[n] * (c * factorial(k) / factorial(n))
        polys.append(acc)
    fam = family_from_polys(polys, N if N is not None else M, N_y if N_y is not None else M, name)
    for n, fn in enumerate(fam.fns):
        if fn != fns[n].truncate(fam.N_y):
            raise InconsistentSystem(f"recovered f_{n} disagrees with the prescribed series")
    return fam


def monomial_family(N=None, N_y=None):
    N, N_y, M = _table_size(N, N_y)
    return family_from_polys([XPoly.monomial(n) for n in range(M + 1)], N, N_y, "monomial", YSeries.gen(M))


def falling_family(N=None, N_y=None):
    N, N_y, M = _table_size(N, N_y)
    return binomial_from_f(exp_series(M) - 1, N, N_y, "falling")


def qexp_fns(M):
    """``f_n = y^n exp(n(n-1)y/2)`` for ``n = 0..M`` to order ``M``."""
    return [exp_series(M - n, scale=Fraction(n * (n - 1), 2)).shift_up(n) for n in range(M + 1)]


def qexp_family(N=None, N_y=None):
    N, N_y, M = _table_size(N, N_y)
    return family_from_fns(qexp_fns(M), N, N_y, "qexp")


def builtin(name, N=None, N_y=None):
    try:
        maker = {"monomial": monomial_family, "falling": falling_family, "qexp": qexp_family}[name]
    except KeyError:
        raise ValueError(f"unknown builtin family {name!r}; choose from {', '.join(BUILTINS)}") from None
    return maker(N, N_y)


def random_xi_table(rng, M, vanishing=True, spread=3):
    """Random ξ table with small rational entries.

    ``vanishing=True`` forces ``p_n(0) = 0`` for ``n >= 1`` (``xi[n][n] = 0``);
    ``vanishing=False`` forces ``p_1(0) != 0``.
    """
    table = []
    for n in range(M + 1):
        row = [Fraction(1)]
        for k in range(1, n + 1):
            row.append(Fraction(rng.randint(-spread, spread), rng.randint(1, spread)))
        if n >= 1 and vanishing:
            row[n] = Fraction(0)
        if n == 1 and not vanishing:
            row[1] = Fraction(rng.choice([-1, 1]) * rng.randint(1, spread), rng.randint(1, spread))
        table.append(row)
    return table


def random_family(seed, N=10, N_y=12, vanishing=True):
    rng = random.Random(seed)
    M = max(N, N_y)
    return family_from_xi(random_xi_table(rng, M, vanishing), N, N_y, f"random({seed})")


# ---------------------------------------------------------------------------
# checks and derived families


class LemmaReport(NamedTuple):
    f0_is_one: bool
    all_vanish: bool


def vanish_lemma_check(fam):
    """Both sides of ``f_0 = 1  <=>  p_n(0) = 0 for all n >= 1``.

    Compared on the common range ``n <= N_y``; disagreement means a
    construction bug and raises ``LemmaViolation``.
    """
    f0 = fam.fns[0]
    f0_is_one = f0.coeffs[0] == 1 and not any(f0.coeffs[1:])
    top = min(fam.N_y, fam.table_size)
    all_vanish = all(fam.polys[n][0] == 0 for n in range(1, top + 1))
    if f0_is_one != all_vanish:
        raise LemmaViolation(f"f_0 == 1 is {f0_is_one} but p_n(0) == 0 is {all_vanish}")
    return LemmaReport(f0_is_one, all_vanish)


def tilde_fns(fam):
    """``f~_n = (f_(n+1) / f_0)' / (n+1)`` to order ``N_y - 1``."""
    f0 = fam.fns[0]
    return [
        deriv_y(series_div(fam.fns[n + 1], f0)) * Fraction(1, n + 1)
        for n in range(fam.table_size)
    ]


def tilde_family(fam):
    """The family ``p~_n = f_0(D) p_(n+1) / x`` with its series ``f~_n``."""
    if fam.table_size < 1 or fam.N_y < 1:
        raise OrderExhausted("tilde family needs at least p_0, p_1 and order 1")
    f0 = fam.fns[0]
    top = min(fam.table_size, fam.N_y) - 1
    polys = []
    for n in range(top + 1):
        q, r = apply_series_in_D(f0, fam.polys[n + 1]).divmod(X)
        if not r.is_zero():
            raise NonzeroRemainder(f"f_0(D) p_{n + 1} is not divisible by x (remainder {r})")
        polys.append(q)
    N_y = min(fam.N_y - 1, top)
    tilde = family_from_polys(polys, min(fam.N, top), N_y, f"tilde({fam.name})")
    for n, fn in enumerate(tilde_fns(fam)[: top + 1]):
        if fn.truncate(N_y) != tilde.fns[n]:
            raise InconsistentSystem(f"f~_{n} from the ratio formula disagrees with the synthesized series")
    return tilde


class GFCheck(NamedTuple):
    ok: bool
    mismatch: tuple | None  # (x power, y power, got, expected)


def check_gf_identity(fam, window=None):
    """Compare ``sum_n p_n(x) f_n(y) / n!`` with ``e^(xy)`` on ``x^a y^b``, ``a, b <= window``."""
    limit = min(fam.N_y, fam.table_size)
    window = limit if window is None else window
    if window > limit:
        raise OrderExhausted(f"window {window} exceeds the known order {limit}")
    for b in range(window + 1):
        row = [Fraction(0)] * (window + 1)
        for n in range(b + 1):
            c = fam.fns[n].coeffs[b]
            if not c:
                continue
            c = c / factorial(n)
            for a, v in enumerate(fam.polys[n].coeffs[: window + 1]):
                row[a] += c * v
        for a in range(window + 1):
            expected = Fraction(1, factorial(a)) if a == b else Fraction(0)
            if row[a] != expected:
                return GFCheck(False, (a, b, row[a], expected))
    return GFCheck(True, None)


# ---------------------------------------------------------------------------
# JSON


def family_from_json(obj, N=None, N_y=None):
    """Build a family from ``{"kind": ..., "N": ..., "data": ...}``.

    Explicit ``N``/``N_y`` arguments win over the values in the document.
    """
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj["kind"]
    N = obj.get("N") if N is None else N
    N_y = obj.get("N_y") if N_y is None else N_y
    data = obj["data"]
    if kind == "builtin":
        return builtin(data, N, N_y)
    if kind == "xi":
        table = [[rat_from_json(c) for c in row] for row in data]
        M = len(table) - 1
        return family_from_xi(table, M if N is None else N, M if N_y is None else N_y, "xi")
    if kind == "binomial":
        if isinstance(data, str):
            from umbra.dsl import parse_series

            _, _, M = _table_size(N, N_y)
            f = parse_series(data).evaluate(M)
        else:
            f = YSeries.from_json(data)
        return binomial_from_f(f, N, N_y)
    if kind == "fns":
        fns = [YSeries.from_json(s) for s in data]
        return family_from_fns(fns, N, N_y)
    raise ValueError(f"unknown family kind {kind!r}")

