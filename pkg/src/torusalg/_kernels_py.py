"""Pure-Python integer row reduction (reference and fallback kernel)."""
from math import gcd


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def row_reduce(rows, ncols):
    """Fraction-free reduced row echelon form of an integer matrix.

    Returns ``(reduced, pivots)``.  Every reduced row is primitive with a
    positive pivot, and each pivot column is zero outside its pivot row.
    Zero rows are dropped.
    """
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = -1
        for i in range(r, nrows):
            if m[i][c]:
                p = i
                break
        if p < 0:
            continue
        m[r], m[p] = m[p], m[r]
        prow = m[r]
        if prow[c] < 0:
            prow = [-x for x in prow]
        prow = _primitive(prow)
        m[r] = prow
        a = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            b = m[i][c]
            if b:
                g = gcd(a, b)
                fa, fb = a // g, b // g
                row = m[i]
                m[i] = _primitive([fa * x - fb * y for x, y in zip(row, prow)])
        pivots.append(c)
        r += 1
    return m[:r], pivots
