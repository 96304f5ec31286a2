"""Pure-Python convolution and matrix kernels over ``Fraction``.

Every kernel clears denominators first and works on Python ints, so the
inner loops never touch ``Fraction`` arithmetic. The compiled twin in
``_kernels.pyx`` has the same signatures and must return identical values.
"""

from fractions import Fraction
from math import lcm


def _scaled(values):
    den = lcm(*[v.denominator for v in values]) if values else 1
    return [v.numerator * (den // v.denominator) for v in values], den


def conv(a, b, n):
    """Cauchy product of two coefficient lists, truncated to degree ``n``.

    ``n < 0`` keeps the full product.
    """
    if not a or not b:
        return [Fraction(0)] * (n + 1 if n >= 0 else 0)
    size = len(a) + len(b) - 1 if n < 0 else n + 1
    ia, da = _scaled(list(a[:size]))
    ib, db = _scaled(list(b[:size]))
    out = [0] * size
    for i, x in enumerate(ia):
        if x:
            for j in range(min(len(ib), size - i)):
                out[i + j] += x * ib[j]
    den = da * db
    return [Fraction(c, den) for c in out]


def conv2(a, b, n, m):
    """Product of two bivariate arrays given as lists of rows.

    Rows are convolved along the outer index up to ``n`` and each row product
    is truncated to inner degree ``m`` (``m < 0``: exact, no inner truncation).
    Output rows have trailing zeros removed when ``m < 0``.
    """
    size = n + 1
    flat_a = [v for row in a[:size] for v in row]
    flat_b = [v for row in b[:size] for v in row]
    _, da = _scaled(flat_a)
    _, db = _scaled(flat_b)
    ia = [[v.numerator * (da // v.denominator) for v in row] for row in a[:size]]
    ib = [[v.numerator * (db // v.denominator) for v in row] for row in b[:size]]
    acc = [[] for _ in range(size)]
    for i, ra in enumerate(ia):
        if not any(ra):
            continue
        for j in range(min(len(ib), size - i)):
            rb = ib[j]
            if not rb:
                continue
            target = acc[i + j]
            width = len(ra) + len(rb) - 1
            if m >= 0:
                width = min(width, m + 1)
            if len(target) < width:
                target.extend([0] * (width - len(target)))
            for p, x in enumerate(ra):
                if p >= width:
                    break
                if x:
                    for q in range(min(len(rb), width - p)):
                        target[p + q] += x * rb[q]
    den = da * db
    out = []
    for row in acc:
        if m >= 0:
            row = row + [0] * (m + 1 - len(row))
        else:
            while row and row[-1] == 0:
                row.pop()
        out.append([Fraction(c, den) for c in row])
    return out


def matmul(a, b):
    """Dense product of two matrices stored as lists of rows."""
    inner = len(b)
    cols = len(b[0]) if b else 0
    _, da = _scaled([v for row in a for v in row])
    _, db = _scaled([v for row in b for v in row])
    ia = [[v.numerator * (da // v.denominator) for v in row] for row in a]
    ib = [[v.numerator * (db // v.denominator) for v in row] for row in b]
    den = da * db
    out = []
    for row in ia:
        acc = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                rb = ib[k]
                for j in range(cols):
                    acc[j] += x * rb[j]
        out.append([Fraction(c, den) for c in acc])
    return out
