# cython: language_level=3, boundscheck=False
"""GMP-backed versions of the kernels in ``_kernels_py``.

Same signatures, same results. Denominators are cleared in Python, the
integer convolutions run on ``mpz_t`` arrays.
"""

from cpython.long cimport PyLong_AsLongAndOverflow, PyLong_FromLong
from libc.stdlib cimport malloc, free

from fractions import Fraction
from math import lcm


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        int _mp_alloc
        int _mp_size
        void* _mp_d
    ctypedef __mpz_struct* mpz_ptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set_si(mpz_ptr, long)
    long mpz_get_si(mpz_ptr)
    int mpz_fits_slong_p(mpz_ptr)
    void mpz_addmul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_neg(mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    size_t mpz_sizeinbase(mpz_ptr, int)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void*)
    void* mpz_export(void*, size_t*, int, size_t, int, size_t, mpz_ptr)


cdef void _set(mpz_ptr z, object v):
    cdef int overflow = 0
    cdef long small = PyLong_AsLongAndOverflow(v, &overflow)
    cdef bytes data
    if not overflow:
        mpz_set_si(z, small)
        return
    neg = v < 0
    if neg:
        v = -v
    nbytes = (v.bit_length() + 7) // 8
    data = v.to_bytes(nbytes, "little")
    mpz_import(z, nbytes, -1, 1, 0, 0, <const char*>data)
    if neg:
        mpz_neg(z, z)


cdef object _get(mpz_ptr z):
    cdef size_t count = 0
    cdef bytearray buf
    if mpz_fits_slong_p(z):
        return PyLong_FromLong(mpz_get_si(z))
    nbytes = (mpz_sizeinbase(z, 2) + 7) // 8
    buf = bytearray(nbytes)
    mpz_export(<char*>buf, &count, -1, 1, 0, 0, z)
    v = int.from_bytes(bytes(buf[:count]), "little")
    return -v if mpz_sgn(z) < 0 else v


cdef mpz_ptr _alloc(Py_ssize_t size):
    cdef mpz_ptr arr = <mpz_ptr>malloc(max(size, 1) * sizeof(__mpz_struct))
    cdef Py_ssize_t i
    if arr == NULL:
        raise MemoryError()
    for i in range(size):
        mpz_init(&arr[i])
    return arr


cdef void _release(mpz_ptr arr, Py_ssize_t size):
    cdef Py_ssize_t i
    for i in range(size):
        mpz_clear(&arr[i])
    free(arr)


def _scaled(values):
    den = lcm(*[v.denominator for v in values]) if values else 1
    return [v.numerator * (den // v.denominator) for v in values], den


def _offsets(lengths):
    out = [0]
    acc = 0
    for w in lengths:
        acc += w
        out.append(acc)
    return out


def conv(a, b, long n):
    cdef Py_ssize_t size, la, lb, i, j, stop
    cdef mpz_ptr za
    cdef mpz_ptr zb
    cdef mpz_ptr out
    if not a or not b:
        return [Fraction(0)] * (n + 1 if n >= 0 else 0)
    size = len(a) + len(b) - 1 if n < 0 else n + 1
    ia, da = _scaled(list(a[:size]))
    ib, db = _scaled(list(b[:size]))
    la = len(ia)
    lb = len(ib)
    za = _alloc(la)
    zb = _alloc(lb)
    out = _alloc(size)
    try:
        for i in range(la):
            _set(&za[i], ia[i])
        for j in range(lb):
            _set(&zb[j], ib[j])
        for i in range(la):
            if mpz_sgn(&za[i]) == 0:
                continue
            stop = min(lb, size - i)
            for j in range(stop):
                mpz_addmul(&out[i + j], &za[i], &zb[j])
        den = da * db
        return [Fraction(_get(&out[i]), den) for i in range(size)]
    finally:
        _release(za, la)
        _release(zb, lb)
        _release(out, size)


def conv2(a, b, long n, long m):
    cdef Py_ssize_t size = n + 1
    cdef Py_ssize_t ra, rb, i, j, p, q, width, qa, qb, oa, ob, total_a, total_b, total_o
    cdef mpz_ptr za
    cdef mpz_ptr zb
    cdef mpz_ptr zo
    rows_a = [list(r) for r in a[:size]]
    rows_b = [list(r) for r in b[:size]]
    _, da = _scaled([v for row in rows_a for v in row])
    _, db = _scaled([v for row in rows_b for v in row])
    ra = len(rows_a)
    rb = len(rows_b)
    off_a = _offsets([len(row) for row in rows_a])
    off_b = _offsets([len(row) for row in rows_b])
    # output row widths
    widths = [0] * size
    for i in range(ra):
        if not rows_a[i]:
            continue
        for j in range(min(rb, size - i)):
            if not rows_b[j]:
                continue
            width = len(rows_a[i]) + len(rows_b[j]) - 1
            if m >= 0:
                width = min(width, m + 1)
            if width > widths[i + j]:
                widths[i + j] = width
    if m >= 0:
        widths = [m + 1] * size
    off_o = _offsets(widths)
    total_a = off_a[ra]
    total_b = off_b[rb]
    total_o = off_o[size]
    za = _alloc(total_a)
    zb = _alloc(total_b)
    zo = _alloc(total_o)
    try:
        for i in range(ra):
            for p, v in enumerate(rows_a[i]):
                _set(&za[<Py_ssize_t>off_a[i] + p], v.numerator * (da // v.denominator))
        for j in range(rb):
            for q, v in enumerate(rows_b[j]):
                _set(&zb[<Py_ssize_t>off_b[j] + q], v.numerator * (db // v.denominator))
        for i in range(ra):
            oa = off_a[i]
            qa = off_a[i + 1] - oa
            if qa == 0:
                continue
            for j in range(min(rb, size - i)):
                ob = off_b[j]
                qb = off_b[j + 1] - ob
                if qb == 0:
                    continue
                width = widths[i + j]
                base = off_o[i + j]
                for p in range(min(qa, width)):
                    if mpz_sgn(&za[oa + p]) == 0:
                        continue
                    for q in range(min(qb, width - p)):
                        mpz_addmul(&zo[<Py_ssize_t>base + p + q], &za[oa + p], &zb[ob + q])
        den = da * db
        out = []
        for i in range(size):
            row = [_get(&zo[<Py_ssize_t>off_o[i] + p]) for p in range(widths[i])]
            if m < 0:
                while row and row[-1] == 0:
                    row.pop()
            out.append([Fraction(c, den) for c in row])
        return out
    finally:
        _release(za, total_a)
        _release(zb, total_b)
        _release(zo, total_o)


def matmul(a, b):
    cdef Py_ssize_t rows = len(a)
    cdef Py_ssize_t inner = len(b)
    cdef Py_ssize_t cols = len(b[0]) if b else 0
    cdef Py_ssize_t i, j, k
    cdef mpz_ptr za
    cdef mpz_ptr zb
    cdef mpz_ptr zo
    _, da = _scaled([v for row in a for v in row])
    _, db = _scaled([v for row in b for v in row])
    za = _alloc(rows * inner)
    zb = _alloc(inner * cols)
    zo = _alloc(rows * cols)
    try:
        for i in range(rows):
            for k in range(inner):
                v = a[i][k]
                _set(&za[i * inner + k], v.numerator * (da // v.denominator))
        for k in range(inner):
            for j in range(cols):
                v = b[k][j]
                _set(&zb[k * cols + j], v.numerator * (db // v.denominator))
        for i in range(rows):
            for k in range(inner):
                if mpz_sgn(&za[i * inner + k]) == 0:
                    continue
                for j in range(cols):
                    mpz_addmul(&zo[i * cols + j], &za[i * inner + k], &zb[k * cols + j])
        den = da * db
        return [[Fraction(_get(&zo[i * cols + j]), den) for j in range(cols)] for i in range(rows)]
    finally:
        _release(za, rows * inner)
        _release(zb, inner * cols)
        _release(zo, rows * cols)
