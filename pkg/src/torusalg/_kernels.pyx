# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer row reduction on 64-bit words.

Raises OverflowError when an intermediate leaves the int64 range; callers
then rerun the same elimination on Python integers.
"""
from libc.stdlib cimport malloc, free
from libc.limits cimport LLONG_MAX

cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a

cdef inline bint _mul_ok(long long a, long long b) nogil:
    if a == 0 or b == 0:
        return True
    cdef long long aa = a if a > 0 else -a
    cdef long long bb = b if b > 0 else -b
    return aa <= LLONG_MAX // bb

cdef int _primitive(long long* row, int n) nogil:
    cdef long long g = 0
    cdef int j
    for j in range(n):
        if row[j]:
            g = _gcd(g, row[j])
            if g == 1:
                return 0
    if g > 1:
        for j in range(n):
            row[j] = row[j] // g
    return 0


def row_reduce(rows, int ncols):
    cdef list src = [row for row in rows if any(row)]
    cdef int nrows = len(src)
    cdef int i, j, c, p, r = 0
    cdef long long a, b, g, fa, fb, x, y
    cdef long long* m
    cdef long long* tmp
    cdef list pivots = []
    if nrows == 0 or ncols == 0:
        return [], []
    m = <long long*> malloc(nrows * ncols * sizeof(long long))
    tmp = <long long*> malloc(ncols * sizeof(long long))
    try:
        for i in range(nrows):
            for j in range(ncols):
                m[i * ncols + j] = src[i][j]
        for c in range(ncols):
            if r == nrows:
                break
            p = -1
            for i in range(r, nrows):
                if m[i * ncols + c]:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for j in range(ncols):
                    tmp[j] = m[r * ncols + j]
                    m[r * ncols + j] = m[p * ncols + j]
                    m[p * ncols + j] = tmp[j]
            if m[r * ncols + c] < 0:
                for j in range(ncols):
                    m[r * ncols + j] = -m[r * ncols + j]
            _primitive(&m[r * ncols], ncols)
            a = m[r * ncols + c]
            for i in range(nrows):
                if i == r:
                    continue
                b = m[i * ncols + c]
                if b == 0:
                    continue
                g = _gcd(a, b)
                fa = a // g
                fb = b // g
                for j in range(ncols):
                    x = m[i * ncols + j]
                    y = m[r * ncols + j]
                    if not (_mul_ok(fa, x) and _mul_ok(fb, y)):
                        raise OverflowError("int64 overflow in row_reduce")
                    x = fa * x
                    y = fb * y
                    if (y < 0 and x > LLONG_MAX + y) or (y > 0 and x < -LLONG_MAX + y):
                        raise OverflowError("int64 overflow in row_reduce")
                    m[i * ncols + j] = x - y
                _primitive(&m[i * ncols], ncols)
            pivots.append(c)
            r += 1
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
        return out, pivots
    finally:
        free(m)
        free(tmp)
