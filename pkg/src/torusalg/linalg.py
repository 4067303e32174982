"""Exact linear algebra over the rationals on top of an integer row-reduction kernel.

The compiled kernel (``_kernels``) is used when it was built; otherwise the
pure-Python kernel runs.  Set ``TORUSALG_PURE_PYTHON=1`` to force the fallback.
"""
import os
from fractions import Fraction
from math import gcd, lcm

from . import _kernels_py

try:
    if os.environ.get("TORUSALG_PURE_PYTHON"):
        raise ImportError
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _integral(row):
    dens = [x.denominator for x in row if isinstance(x, Fraction) and x.denominator != 1]
    if not dens:
        return [int(x) for x in row]
    m = lcm(*dens)
    return [int(x * m) for x in row]


def row_reduce(rows, ncols, backend=None):
    """Integer RREF of ``rows`` (entries int or Fraction); see ``_kernels_py.row_reduce``."""
    rows = [_integral(r) for r in rows]
    use = backend or BACKEND
    if use == "cython" and _compiled is not None:
        try:
            return _compiled.row_reduce(rows, ncols)
        except OverflowError:
            pass
    return _kernels_py.row_reduce(rows, ncols)


def rank(rows, ncols):
    if not rows or not ncols:
        return 0
    return len(row_reduce(rows, ncols)[1])


def nullspace(rows, ncols):
    """Primitive integer basis of ``{v : A v = 0}`` for ``A`` given by rows."""
    red, piv = row_reduce(rows, ncols) if rows else ([], [])
    pset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        den = 1
        for row, p in zip(red, piv):
            if row[f]:
                den = lcm(den, row[p])
        v = [0] * ncols
        v[f] = den
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f] * den // row[p]
        g = 0
        for x in v:
            g = gcd(g, x)
        basis.append([x // g for x in v])
    return basis


def transpose(rows, ncols):
    return [[r[j] for r in rows] for j in range(ncols)]


def left_nullspace(rows, ncols):
    """Basis of ``{w : w A = 0}``."""
    return nullspace(transpose(rows, ncols), len(rows))


def span_basis(vectors, ncols):
    return row_reduce(vectors, ncols)[0] if vectors else []


def complement_basis(subspace, ncols):
    """Standard unit vectors completing a basis of ``subspace`` to the whole space."""
    red, piv = row_reduce(subspace, ncols) if subspace else ([], [])
    pset = set(piv)
    return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols) if i not in pset]


def in_span(vector, vectors, ncols):
    if not any(vector):
        return True
    return rank(list(vectors) + [vector], ncols) == rank(list(vectors), ncols)


def matmul(a, b):
    """Product of dense matrices given as lists of rows."""
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def solve(a_rows, ncols, b):
    """One rational solution ``x`` of ``A x = b`` or ``None``."""
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    red, piv = row_reduce(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = Fraction(row[ncols], row[p])
    return x


def express(basis, vectors, n):
    """Coordinates of each of ``vectors`` in the independent list ``basis`` (length-``n`` vectors).

    Raises ``ValueError`` if some vector is outside the span.
    """
    b, m = len(basis), len(vectors)
    if not m:
        return []
    if not b:
        if any(any(v) for v in vectors):
            raise ValueError("vector outside span")
        return [[] for _ in vectors]
    aug = [[basis[j][i] for j in range(b)] + [vectors[k][i] for k in range(m)] for i in range(n)]
    red, piv = row_reduce(aug, b + m)
    out = [[Fraction(0)] * b for _ in range(m)]
    for row, p in zip(red, piv):
        if p >= b:
            raise ValueError("vector outside span")
        for k in range(m):
            if row[b + k]:
                out[k][p] = Fraction(row[b + k], row[p])
    return out


def apply(mat, vec):
    """``mat @ vec`` for a matrix given by rows."""
    return [sum(a * x for a, x in zip(row, vec)) for row in mat]


def zeros(nr, nc):
    return [[0] * nc for _ in range(nr)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
