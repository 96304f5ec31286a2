import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umbra import _backend, _kernels_py

try:
    from umbra import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")

fracs = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**6) | st.builds(
    Fraction, st.integers(-(10**40), 10**40), st.integers(1, 10**20)
)
vectors = st.lists(fracs, max_size=12)
matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(fracs, min_size=n, max_size=n), min_size=n, max_size=n)
)


def naive_conv(a, b, n):
    size = len(a) + len(b) - 1 if n < 0 else n + 1
    if not a or not b:
        return [Fraction(0)] * (n + 1 if n >= 0 else 0)
    out = [Fraction(0)] * size
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < size:
                out[i + j] += x * y
    return out


@given(vectors, vectors, st.integers(-1, 15))
def test_python_conv_matches_schoolbook(a, b, n):
    assert _kernels_py.conv(a, b, n) == naive_conv(a, b, n)


@needs_ext
@settings(max_examples=150)
@given(vectors, vectors, st.integers(-1, 15))
def test_conv_backends_agree(a, b, n):
    assert _kernels.conv(a, b, n) == _kernels_py.conv(a, b, n)


@needs_ext
@settings(max_examples=100)
@given(st.lists(vectors, max_size=6), st.lists(vectors, max_size=6), st.integers(0, 6), st.integers(-1, 8))
def test_conv2_backends_agree(A, B, n, m):
    assert _kernels.conv2(A, B, n, m) == _kernels_py.conv2(A, B, n, m)


@needs_ext
@settings(max_examples=100)
@given(matrices)
def test_matmul_backends_agree(M):
    assert _kernels.matmul(M, M) == _kernels_py.matmul(M, M)


def test_conv2_truncated_rows_have_fixed_width():
    A = [[Fraction(1), Fraction(2)], [Fraction(3)]]
    rows = _kernels_py.conv2(A, A, 1, 1)
    # (1 + 2x)^2 = 1 + 4x + ..., 2 (1 + 2x) 3 = 6 + 12x
    assert rows == [[1, 4], [6, 12]]


def test_huge_integers_survive_the_round_trip():
    big = Fraction(3**200, 7**50)
    for impl in filter(None, (_kernels_py, _kernels)):
        assert impl.conv([big, -big], [big], -1) == [big * big, -big * big]


def test_backend_is_reported():
    assert _backend.BACKEND in ("gmp", "python")
    if _kernels is not None and os.environ.get("UMBRA_PURE_PYTHON") != "1":
        assert _backend.BACKEND == "gmp"


def test_environment_forces_pure_python():
    env = dict(os.environ, UMBRA_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from umbra._backend import BACKEND; print(BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
