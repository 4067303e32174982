"""Degreewise-finite graded modules over Q[c_1..c_k] with |c_j| = -2.

Every module answers two questions: the dimension of its degree ``d`` piece,
and the matrix of ``c_j`` from degree ``d`` to degree ``d - 2``.  Matrices are
lists of rows acting on column vectors.  Everything is exact.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb

from .linalg import (apply, complement_basis, express, matmul, nullspace, rank,
                     row_reduce, span_basis, zeros)


class WindowInsufficient(ValueError):
    """A windowed computation did not stabilize or needs a larger window."""


class UnsupportedModes(TypeError):
    pass


# -- polynomial rings ----------------------------------------------------------

@lru_cache(maxsize=None)
def monomials(k, i):
    """Exponent tuples of total degree ``i`` in ``k`` variables, in a fixed order."""
    if i < 0:
        return ()
    if k == 0:
        return ((),) if i == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(k), i):
        e = [0] * k
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(k, i):
    return {m: n for n, m in enumerate(monomials(k, i))}


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class PolyRing:
    def __init__(self, num_gens):
        if num_gens < 0:
            raise ValueError("negative number of generators")
        self.num_gens = num_gens

    gen_degree = -2

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.num_gens == self.num_gens

    def __hash__(self):
        return hash(("PolyRing", self.num_gens))

    def __repr__(self):
        return f"PolyRing({self.num_gens})"

    def dim(self, d):
        if d > 0 or d % 2:
            return 0
        return comb(-d // 2 + self.num_gens - 1, self.num_gens - 1) if self.num_gens else int(d == 0)


# Ring elements are dicts {exponent tuple: coefficient}.

def ring_one(k):
    return {tuple([0] * k): 1}


def linear_form(coeffs):
    k = len(coeffs)
    out = {}
    for j, a in enumerate(coeffs):
        if a:
            e = [0] * k
            e[j] = 1
            out[tuple(e)] = a
    return out


def ring_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = mono_mul(ea, eb)
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def ring_degree(a):
    """Degree of a homogeneous element (``None`` for zero)."""
    degs = {-2 * sum(e) for e, c in a.items() if c}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("inhomogeneous ring element")
    return degs.pop()


def ring_is_unit(a):
    nz = {e: c for e, c in a.items() if c}
    return len(nz) == 1 and not any(next(iter(nz))) and True


# -- modules --------------------------------------------------------------------

class GradedModule:
    """Base class.  Subclasses implement ``_dim`` and ``_act``."""

    mode = "abstract"

    def __init__(self, k):
        self.k = k
        self._lock = threading.Lock()
        self._dim_cache = {}
        self._act_cache = {}

    @property
    def ring(self):
        return PolyRing(self.k)

    def dim(self, d):
        try:
            return self._dim_cache[d]
        except KeyError:
            v = self._dim(d)
            with self._lock:
                self._dim_cache[d] = v
            return v

    def act(self, j, d):
        """Matrix of ``c_j`` from degree ``d`` to ``d - 2``."""
        key = (j, d)
        try:
            return self._act_cache[key]
        except KeyError:
            if not 0 <= j < self.k:
                raise IndexError(f"variable {j} out of range for {self.k} variables")
            a, b = self.dim(d), self.dim(d - 2)
            m = self._act(j, d) if a and b else zeros(b, a)
            with self._lock:
                self._act_cache[key] = m
            return m

    def act_mono(self, mono, d):
        """Matrix of the monomial ``mono`` starting in degree ``d``."""
        n = self.dim(d)
        mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        cur = d
        for j, e in enumerate(mono):
            for _ in range(e):
                mat = _mm(self.act(j, cur), mat, self.dim(cur - 2), n)
                cur -= 2
        return mat

    def act_elem(self, elem, d):
        deg = ring_degree(elem)
        if deg is None:
            return zeros(self.dim(d), self.dim(d))
        out = zeros(self.dim(d + deg), self.dim(d))
        for mono, c in elem.items():
            if not c:
                continue
            m = self.act_mono(mono, d)
            for r in range(len(out)):
                for s in range(len(out[r])):
                    out[r][s] += c * m[r][s]
        return out

    def bounds(self):
        """``(lo, hi)``: every nonzero piece lies in ``[lo, hi]``; ``None`` means unbounded."""
        return (None, None)

    def pieces(self, lo, hi):
        return {d: self.dim(d) for d in range(lo, hi + 1) if self.dim(d)}

    def total_dimension(self):
        lo, hi = self.bounds()
        if lo is None or hi is None:
            raise WindowInsufficient("module is not of finite total dimension")
        return sum(self.dim(d) for d in range(lo, hi + 1))

    def is_zero_on(self, lo, hi):
        return all(self.dim(d) == 0 for d in range(lo, hi + 1))


class FPModule(GradedModule):
    """``F / Rel`` with ``F`` free on generators of the given degrees.

    A relation is a list of ring elements, one per generator, homogeneous of a
    common degree.
    """

    mode = "fp"

    def __init__(self, k, gens, rels=()):
        super().__init__(k)
        self.gens = tuple(int(g) for g in gens)
        self.rels = []
        self.rel_degrees = []
        for rel in rels:
            rel = [dict(e) for e in rel]
            if len(rel) != len(self.gens):
                raise ValueError("relation length does not match generator count")
            deg = None
            for g, e in zip(self.gens, rel):
                de = ring_degree(e)
                if de is None:
                    continue
                if deg is not None and deg != g + de:
                    raise ValueError("inhomogeneous relation")
                deg = g + de
            if deg is not None:
                self.rels.append(rel)
                self.rel_degrees.append(deg)
        self._piece_cache = {}
        self._bounds = None

    def __repr__(self):
        return f"FPModule(k={self.k}, gens={list(self.gens)}, rels={len(self.rels)})"

    # free module bookkeeping
    def free_basis(self, d):
        out = []
        for i, g in enumerate(self.gens):
            if (g - d) % 2 == 0 and g >= d:
                out.extend((i, m) for m in monomials(self.k, (g - d) // 2))
        return out

    def _piece(self, d):
        try:
            return self._piece_cache[d]
        except KeyError:
            pass
        basis = self.free_basis(d)
        index = {b: n for n, b in enumerate(basis)}
        vecs = []
        for rel, deg in zip(self.rels, self.rel_degrees):
            if deg < d or (deg - d) % 2:
                continue
            for m in monomials(self.k, (deg - d) // 2):
                v = [0] * len(basis)
                for i, elem in enumerate(rel):
                    for e, c in elem.items():
                        if c:
                            v[index[(i, mono_mul(e, m))]] += c
                if any(v):
                    vecs.append(v)
        red, piv = row_reduce(vecs, len(basis)) if vecs else ([], [])
        pset = set(piv)
        nonpiv = [n for n in range(len(basis)) if n not in pset]
        out = (basis, index, red, piv, nonpiv)
        with self._lock:
            self._piece_cache[d] = out
        return out

    def _dim(self, d):
        return len(self._piece(d)[4])

    def project(self, d, free_vec):
        """Quotient coordinates of a vector in the free piece of degree ``d``."""
        basis, index, red, piv, nonpiv = self._piece(d)
        v = [Fraction(x) for x in free_vec]
        for row, p in zip(red, piv):
            if v[p]:
                f = v[p] / row[p]
                v = [a - f * b for a, b in zip(v, row)]
        return [v[n] for n in nonpiv]

    def lift(self, d, coords):
        basis, index, red, piv, nonpiv = self._piece(d)
        v = [0] * len(basis)
        for n, c in zip(nonpiv, coords):
            v[n] = c
        return v

    def _act(self, j, d):
        basis, index, red, piv, nonpiv = self._piece(d)
        lower, lindex = self._piece(d - 2)[:2]
        cols = []
        for n in nonpiv:
            i, m = basis[n]
            e = list(m)
            e[j] += 1
            v = [0] * len(lower)
            v[lindex[(i, tuple(e))]] = 1
            cols.append(self.project(d - 2, v))
        return [list(r) for r in zip(*cols)] if cols else []

    def generator_vector(self, i):
        """Quotient coordinates of generator ``i`` in its own degree."""
        d = self.gens[i]
        basis, index = self._piece(d)[:2]
        v = [0] * len(basis)
        v[index[(i, tuple([0] * self.k))]] = 1
        return self.project(d, v)

    def bounds(self, limit=80):
        if self._bounds is not None:
            return self._bounds
        if not self.gens:
            self._bounds = (0, 0)
            return self._bounds
        hi = max(self.gens)
        gmin = min(self.gens)
        lo = None
        if self.k == 0:
            lo = gmin
        else:
            zeros_run = 0
            d = hi
            while d >= gmin - limit:
                if self.dim(d) == 0 and d < gmin:
                    zeros_run += 1
                    if zeros_run == 2:
                        lo = d + 2
                        break
                else:
                    zeros_run = 0
                d -= 1
        if lo is not None:
            while lo <= hi and self.dim(lo) == 0:
                lo += 1
            while hi >= lo and self.dim(hi) == 0:
                hi -= 1
            if lo > hi:
                lo = hi = 0
        self._bounds = (lo, hi)
        return self._bounds

    def is_torsion(self):
        return self.bounds()[0] is not None


def free_module(k, gens=(0,)):
    return FPModule(k, gens)


def quotient_by_monomials(k, powers_or_monos):
    """Cyclic module ``R / (monomials)``; ints are read as pure powers of ``c_j``."""
    rels = []
    for j, item in enumerate(powers_or_monos):
        if isinstance(item, int):
            e = [0] * k
            e[j] = item
            rels.append([{tuple(e): 1}])
        else:
            rels.append([{tuple(item): 1}])
    return FPModule(k, (0,), rels)


class DualModule(GradedModule):
    """Graded Q-dual: ``(N^)_d = (N_{-d})^*``."""

    mode = "dual"

    def __init__(self, base):
        super().__init__(base.k)
        self.base = base

    def __repr__(self):
        return f"DualModule({self.base!r})"

    def _dim(self, d):
        return self.base.dim(-d)

    def _act(self, j, d):
        a = self.base.act(j, -d + 2)  # N_{-d+2} -> N_{-d}
        return [list(r) for r in zip(*a)] if a and a[0] else zeros(self.dim(d - 2), self.dim(d))

    def bounds(self):
        lo, hi = self.base.bounds()
        return (None if hi is None else -hi, None if lo is None else -lo)


class ShiftModule(GradedModule):
    """``Sigma^n M``: ``(Sigma^n M)_d = M_{d-n}``."""

    def __init__(self, base, n):
        super().__init__(base.k)
        self.base = base
        self.n = n
        self.mode = base.mode

    def __repr__(self):
        return f"Sigma^{self.n} {self.base!r}"

    def _dim(self, d):
        return self.base.dim(d - self.n)

    def _act(self, j, d):
        return self.base.act(j, d - self.n)

    def bounds(self):
        lo, hi = self.base.bounds()
        return (None if lo is None else lo + self.n, None if hi is None else hi + self.n)


def shift(m, n):
    if n == 0:
        return m
    if isinstance(m, ShiftModule):
        return shift(m.base, m.n + n)
    return ShiftModule(m, n)


def graded_dual(m):
    if isinstance(m, DualModule):
        return DualModule(m)  # natural iso to m.base, kept explicit
    if isinstance(m, ShiftModule):
        return shift(graded_dual(m.base), -m.n)
    return DualModule(m)


class ZeroModule(GradedModule):
    mode = "fp"

    def _dim(self, d):
        return 0

    def _act(self, j, d):
        return []

    def bounds(self):
        return (0, 0)


class ChangeOfRing(GradedModule):
    """Restriction of scalars along ``c'_j -> sum_i T[j][i] c_i``.

    ``T`` has one row per new variable and one column per variable of ``base``.
    """

    def __init__(self, base, transform):
        super().__init__(len(transform))
        self.base = base
        self.transform = [list(r) for r in transform]
        for r in self.transform:
            if len(r) != base.k:
                raise ValueError("transform width must equal the base number of variables")
        self.mode = base.mode

    def _dim(self, d):
        return self.base.dim(d)

    def _act(self, j, d):
        out = zeros(self.dim(d - 2), self.dim(d))
        for i, a in enumerate(self.transform[j]):
            if a:
                m = self.base.act(i, d)
                for r in range(len(out)):
                    for s in range(len(out[r])):
                        out[r][s] += a * m[r][s]
        return out

    def bounds(self):
        return self.base.bounds()


class LaurentModule(GradedModule):
    """``Q[x, x^-1] (x) V`` for ``V`` of finite total dimension.

    The ring has the variables of ``V`` followed by ``x`` (last).  The basis
    of degree ``d`` is ``x^a (x) v`` with ``|v| = d + 2a``, ordered by ``a``
    and then by the basis of ``V``.
    """

    mode = "localized"

    def __init__(self, base):
        super().__init__(base.k + 1)
        self.base = base
        lo, hi = base.bounds()
        if lo is None or hi is None:
            raise WindowInsufficient("Laurent extension needs a module of finite total dimension")
        self.vlo, self.vhi = lo, hi

    def __repr__(self):
        return f"LaurentModule({self.base!r})"

    def layout(self, d):
        """List of ``(a, offset, dim V_{d+2a})`` blocks."""
        out, off = [], 0
        for e in range(self.vlo, self.vhi + 1):
            if (e - d) % 2:
                continue
            a = (e - d) // 2
            n = self.base.dim(e)
            if n:
                out.append((a, off, n))
                off += n
        return out

    def _dim(self, d):
        return sum(n for _, _, n in self.layout(d))

    def _act(self, j, d):
        src = self.layout(d)
        tgt = {a: (off, n) for a, off, n in self.layout(d - 2)}
        out = zeros(self.dim(d - 2), self.dim(d))
        for a, off, n in src:
            if j == self.k - 1:
                # x^a v -> x^{a+1} v
                toff, tn = tgt[a + 1]
                for i in range(n):
                    out[toff + i][off + i] = 1
            else:
                e = d + 2 * a
                m = self.base.act(j, e)
                if (a in tgt) and self.base.dim(e - 2):
                    toff, _ = tgt[a]
                    for r in range(len(m)):
                        for s in range(n):
                            out[toff + r][off + s] = m[r][s]
        return out

    def residue(self, d):
        """Matrix of ``x^a (x) v -> v`` if ``a = -1`` else ``0``, from degree ``d`` to ``V_{d-2}``."""
        out = zeros(self.base.dim(d - 2), self.dim(d))
        for a, off, n in self.layout(d):
            if a == -1:
                for i in range(n):
                    out[i][off + i] = 1
        return out


class LocalizedModule(GradedModule):
    """``S^-1 M`` for a finite set ``S`` of linear forms, by windowed stabilization.

    Only dimensions are available; the module structure is not materialized.
    """

    mode = "localized"

    def __init__(self, base, forms, window=12):
        super().__init__(base.k)
        self.base = base
        self.forms = [list(f) for f in forms]
        if not self.forms:
            raise ValueError("empty multiplicative set")
        self.window = window
        elem = ring_one(base.k)
        for f in self.forms:
            elem = ring_mul(elem, linear_form(f))
        self.s = elem
        self.q = len(self.forms)

    def _stable_kernel_dim(self, e):
        """Dimension of the ``s``-power torsion in ``M_e``."""
        prev = -1
        n = self.base.dim(e)
        if n == 0:
            return 0
        mat = None
        cur = e
        for _ in range(self.window):
            step = self.base.act_elem(self.s, cur)
            mat = step if mat is None else matmul(step, mat)
            cur -= 2 * self.q
            kd = n - (rank(mat, n) if mat and mat[0] else 0)
            if kd == prev:
                return kd
            prev = kd
        raise WindowInsufficient(f"s-torsion in degree {e} did not stabilize within {self.window} steps")

    def _top(self):
        if isinstance(self.base, FPModule):
            return max(self.base.gens, default=0)
        hi = self.base.bounds()[1]
        return 0 if hi is None else hi

    def _dim(self, d):
        # pieces above the top generator are zero and say nothing about the colimit
        skip = max(0, -(-(d - self._top()) // (2 * self.q)))
        seq = []
        for n in range(skip, skip + self.window):
            e = d - 2 * n * self.q
            seq.append(self.base.dim(e) - self._stable_kernel_dim(e))
            if len(seq) >= 4 and len(set(seq[-3:])) == 1 and seq[-1] == max(seq):
                return seq[-1]
        raise WindowInsufficient(
            f"localized degree {d} did not stabilize within window {self.window}: {seq}")

    def _act(self, j, d):
        raise UnsupportedModes("module structure of a stabilized localization is not materialized")


def localized_piece(m, forms, d, window=12):
    return LocalizedModule(m, forms, window).dim(d)


class ExplicitModule(GradedModule):
    """Finitely many nonzero pieces with explicit action matrices."""

    mode = "fp"

    def __init__(self, k, dims, actions):
        super().__init__(k)
        self.dims = {d: n for d, n in dims.items() if n}
        self.actions = actions  # {(j, d): matrix}

    def _dim(self, d):
        return self.dims.get(d, 0)

    def _act(self, j, d):
        return self.actions.get((j, d)) or zeros(self.dim(d - 2), self.dim(d))

    def bounds(self):
        if not self.dims:
            return (0, 0)
        return (min(self.dims), max(self.dims))


# -- maps -----------------------------------------------------------------------

class GradedMap:
    """Degree-preserving module map given by a per-degree matrix function."""

    def __init__(self, source, target, fn):
        if source.k != target.k:
            raise ValueError("maps must be between modules over the same ring")
        self.source, self.target = source, target
        self._fn = fn
        self._cache = {}

    def matrix(self, d):
        if d not in self._cache:
            a, b = self.source.dim(d), self.target.dim(d)
            m = self._fn(d) if a and b else zeros(b, a)
            self._cache[d] = m
        return self._cache[d]

    def compose(self, other):
        """``self o other``."""
        return GradedMap(other.source, self.target, lambda d: matmul(self.matrix(d), other.matrix(d))
                         if other.matrix(d) else zeros(self.target.dim(d), other.source.dim(d)))

    def is_zero_on(self, lo, hi):
        return all(not any(any(r) for r in self.matrix(d)) for d in range(lo, hi + 1))

    def check_linear(self, lo, hi):
        """``f(c_j m) = c_j f(m)`` on ``[lo, hi]``."""
        for d in range(lo, hi + 1):
            for j in range(self.source.k):
                left = _mm(self.matrix(d - 2), self.source.act(j, d), self.target.dim(d - 2), self.source.dim(d))
                right = _mm(self.target.act(j, d), self.matrix(d), self.target.dim(d - 2), self.source.dim(d))
                if left != right:
                    return False
        return True


def _mm(a, b, nr, nc):
    if not a or not b or not b[0] or not a[0]:
        return zeros(nr, nc)
    return matmul(a, b)


def fp_map(source, target, images):
    """The map from an fp module sending generator ``i`` to ``images[i]`` (target coordinates)."""
    if len(images) != len(source.gens):
        raise ValueError("one image per generator")

    def fn(d):
        basis, index, red, piv, nonpiv = source._piece(d)
        cols = []
        for n in nonpiv:
            i, m = basis[n]
            y = images[i]
            cols.append(apply(target.act_mono(m, source.gens[i]), y) if y else [0] * target.dim(d))
        return [list(r) for r in zip(*cols)]

    f = GradedMap(source, target, fn)
    # relations must die
    for rel, deg in zip(source.rels, source.rel_degrees):
        v = [0] * target.dim(deg)
        for i, elem in enumerate(rel):
            if elem and images[i]:
                v = [a + b for a, b in zip(v, apply(target.act_elem(elem, source.gens[i]), images[i]))]
        if any(v):
            raise ValueError("generator images do not satisfy the relations")
    return f


def zero_map(source, target):
    return GradedMap(source, target, lambda d: zeros(target.dim(d), source.dim(d)))


def identity_map(m):
    return GradedMap(m, m, lambda d: [[1 if i == j else 0 for j in range(m.dim(d))] for i in range(m.dim(d))])


def _check_modes(f):
    # Laurent extensions carry their action; stabilized localizations only know dimensions
    for mod in (f.source, f.target):
        if isinstance(mod, LocalizedModule):
            raise UnsupportedModes(f"kernel/cokernel with modes ({f.source.mode}, {f.target.mode}) is unsupported")


class KernelModule(GradedModule):
    def __init__(self, f):
        super().__init__(f.source.k)
        self.f = f
        self.mode = f.source.mode
        self._basis = {}

    def basis(self, d):
        if d not in self._basis:
            m = self.f.matrix(d)
            n = self.f.source.dim(d)
            self._basis[d] = nullspace(m, n) if (m and n) else [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return self._basis[d]

    def _dim(self, d):
        return len(self.basis(d))

    def _act(self, j, d):
        a = self.f.source.act(j, d)
        imgs = [apply(a, v) for v in self.basis(d)]
        coords = express(self.basis(d - 2), imgs, self.f.source.dim(d - 2))
        return [list(r) for r in zip(*coords)]

    def bounds(self):
        return self.f.source.bounds()

    def inclusion(self):
        return GradedMap(self, self.f.source, lambda d: [list(r) for r in zip(*self.basis(d))])


class CokernelModule(GradedModule):
    def __init__(self, f):
        super().__init__(f.target.k)
        self.f = f
        self.mode = f.target.mode
        self._data = {}

    def data(self, d):
        if d not in self._data:
            n = self.f.target.dim(d)
            m = self.f.matrix(d)
            cols = [list(c) for c in zip(*m)] if m and m[0] else []
            img = span_basis(cols, n) if cols else []
            comp = complement_basis(img, n)
            self._data[d] = (img, comp)
        return self._data[d]

    def _dim(self, d):
        return len(self.data(d)[1])

    def project(self, d, v):
        img, comp = self.data(d)
        c = express(list(img) + list(comp), [v], self.f.target.dim(d))[0]
        return c[len(img):]

    def _act(self, j, d):
        a = self.f.target.act(j, d)
        cols = [self.project(d - 2, apply(a, v)) for v in self.data(d)[1]]
        return [list(r) for r in zip(*cols)]

    def bounds(self):
        return self.f.target.bounds()

    def projection(self):
        return GradedMap(self.f.target, self, lambda d: [list(r) for r in zip(
            *[self.project(d, [1 if i == j else 0 for i in range(self.f.target.dim(d))])
              for j in range(self.f.target.dim(d))])])


def kernel(f):
    _check_modes(f)
    return KernelModule(f)


def cokernel(f):
    _check_modes(f)
    return CokernelModule(f)


def image(f):
    """The image, presented as the kernel of the projection onto the cokernel."""
    _check_modes(f)
    return KernelModule(cokernel(f).projection())


# -- complexes ------------------------------------------------------------------

class GradedComplex:
    """``modules[0] <- modules[1] <- ...`` (homological) or cohomological; ``maps[i]``
    goes from ``modules[i+1]`` to ``modules[i]`` when ``homological`` is true."""

    def __init__(self, modules, maps, homological=True):
        self.modules, self.maps, self.homological = list(modules), list(maps), homological

    def ranks(self):
        return [len(m.gens) if isinstance(m, FPModule) else None for m in self.modules]

    def check_d2(self, lo, hi):
        for a, b in zip(self.maps, self.maps[1:]):
            first, second = (b, a) if self.homological else (a, b)
            if not second.compose(first).is_zero_on(lo, hi):
                return False
        return True

    def homology(self, i, d):
        """Dimension of the homology at ``modules[i]`` in degree ``d``."""
        n = self.modules[i].dim(d)
        if self.homological:
            out_map = self.maps[i - 1] if i > 0 else None
            in_map = self.maps[i] if i < len(self.maps) else None
        else:
            out_map = self.maps[i] if i < len(self.maps) else None
            in_map = self.maps[i - 1] if i > 0 else None
        r_out = _rank_of(out_map, d)
        r_in = _rank_of(in_map, d)
        return n - r_out - r_in


def _rank_of(f, d):
    if f is None:
        return 0
    m = f.matrix(d)
    return rank(m, f.source.dim(d)) if m and f.source.dim(d) else 0


def koszul_complex(k):
    """Free resolution of Q: term ``i`` free on the ``i``-subsets of variables, generators in degree ``-2i``."""
    modules, subsets = [], []
    for i in range(k + 1):
        ss = list(combinations(range(k), i))
        subsets.append(ss)
        modules.append(FPModule(k, [-2 * i] * len(ss)))
    maps = []
    for i in range(1, k + 1):
        src, tgt = modules[i], modules[i - 1]
        tindex = {s: n for n, s in enumerate(subsets[i - 1])}
        images = []
        for s in subsets[i]:
            v = [0] * tgt.dim(-2 * i)
            for pos, a in enumerate(s):
                rest = s[:pos] + s[pos + 1:]
                e = [0] * k
                e[a] = 1
                basis, index = tgt._piece(-2 * i)[:2]
                v[index[(tindex[rest], tuple(e))]] += (-1) ** pos
            images.append(tgt.project(-2 * i, v))
        maps.append(fp_map(src, tgt, images))
    return GradedComplex(modules, maps, homological=True)


# -- free resolutions and Ext -----------------------------------------------------

def _free_mul(mod, d_from, vec, mono):
    """Multiply a free-piece vector of degree ``d_from`` by a monomial."""
    basis = mod.free_basis(d_from)
    d_to = d_from - 2 * sum(mono)
    idx = {b: n for n, b in enumerate(mod.free_basis(d_to))}
    out = [0] * len(idx)
    for (i, m), c in zip(basis, vec):
        if c:
            out[idx[(i, mono_mul(m, mono))]] += c
    return out


def _submodule_generators(free, space_at, hi, lo):
    """Minimal homogeneous generators of a submodule of the free module ``free``.

    ``space_at(d)`` returns a spanning list of the submodule's degree ``d`` piece
    in free-basis coordinates.
    """
    gens = []
    for d in range(hi, lo - 1, -1):
        n = len(free.free_basis(d))
        if not n:
            continue
        sub = space_at(d)
        if not sub:
            continue
        mult = []
        for gd, gv in gens:
            if gd >= d and (gd - d) % 2 == 0:
                for m in monomials(free.k, (gd - d) // 2):
                    mult.append(_free_mul(free, gd, gv, m))
        cur = rank(mult, n) if mult else 0
        for v in span_basis(sub, n):
            if rank(mult + [v], n) > cur:
                mult.append(v)
                cur += 1
                gens.append((d, list(v)))
    return gens


def _to_ring_vector(free, d, vec):
    out = [dict() for _ in free.gens]
    for (i, m), c in zip(free.free_basis(d), vec):
        if c:
            out[i][m] = out[i].get(m, 0) + c
    return out


class FreeResolution:
    """Minimal free resolution ``F_0 <- F_1 <- ...`` computed down to degree ``lo``.

    ``terms[s]`` is the free module ``F_s``; ``differentials[s]`` lists, for each
    generator of ``F_{s+1}``, its image in ``F_s`` as a vector of ring elements.
    """

    def __init__(self, module, lo):
        self.module, self.lo = module, lo
        k = module.k
        if isinstance(module, FPModule):
            hi = max(module.gens) if module.gens else 0
        else:
            hi = module.bounds()[1]
            hi = lo if hi is None else hi
        # minimal generators of the module
        gens = []
        for d in range(hi, lo - 1, -1):
            n = module.dim(d)
            if not n:
                continue
            dec = []
            for j in range(k):
                a = module.act(j, d + 2)
                dec.extend([list(c) for c in zip(*a)] if a and a[0] else [])
            cur = rank(dec, n) if dec else 0
            for i in range(n):
                e = [1 if x == i else 0 for x in range(n)]
                if rank(dec + [e], n) > cur:
                    dec.append(e)
                    cur += 1
                    gens.append((d, e))
        f0 = FPModule(k, [g for g, _ in gens])
        aug = fp_map(f0, module, [v for _, v in gens]) if gens else None
        self.augmentation = aug
        self.terms = [f0]
        self.differentials = []
        prev_map = lambda d: aug.matrix(d) if aug else []
        prev = f0
        for s in range(k + 1):
            def space(d, prev=prev, prev_map=prev_map):
                n = len(prev.free_basis(d))
                m = prev_map(d)
                if not n:
                    return []
                if not m or not any(any(r) for r in m):
                    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
                return nullspace(m, n)
            top = max(prev.gens) if prev.gens else lo - 1
            sy = _submodule_generators(prev, space, top, lo)
            if not sy:
                break
            nxt = FPModule(k, [d for d, _ in sy])
            self.differentials.append([_to_ring_vector(prev, d, v) for d, v in sy])

            def mapfn(d, nxt=nxt, prev=prev, sy=sy):
                cols = []
                for i, m in nxt.free_basis(d):
                    gd, gv = sy[i]
                    cols.append(_free_mul(prev, gd, gv, m))
                return [list(r) for r in zip(*cols)] if cols else []
            self.terms.append(nxt)
            prev_map, prev = mapfn, nxt

    def betti(self):
        return [len(t.gens) for t in self.terms]

    def generator_degrees(self):
        return [list(t.gens) for t in self.terms]


def _default_lo(m, k):
    lo, _ = m.bounds()
    if lo is not None:
        return lo - 2 * k
    degs = list(m.gens) + list(m.rel_degrees)
    return min(degs) - 2 * k - 2 if degs else 0


def free_resolution(m, lo=None):
    if not isinstance(m, FPModule):
        blo, bhi = m.bounds()
        if blo is not None and bhi is not None:
            return FreeResolution(m, blo - 2 * m.k if lo is None else lo)
        raise UnsupportedModes(f"free resolution needs an fp module, got mode {m.mode}")
    return FreeResolution(m, _default_lo(m, m.k) if lo is None else lo)


def ext_over_poly(m, n, window):
    """``{(s, t): dim Ext^{s,t}_R(m, n)}`` for ``t`` in ``window = (lo, hi)``.

    Degree ``t`` maps send ``m_d`` to ``n_{d+t}``.
    """
    if m.k != n.k:
        raise ValueError("ring mismatch")
    tlo, thi = window
    nlo, _ = n.bounds()
    lo = _default_lo(m, m.k)
    if nlo is not None:
        lo = min(lo, nlo - thi)
    elif not (isinstance(m, FPModule) and m.is_torsion()):
        # generators of every syzygy are needed; trust the default bound
        pass
    res = free_resolution(m, lo)
    terms, diffs = res.terms, res.differentials
    out = {}
    for t in range(tlo, thi + 1):
        dims = []
        mats = []
        for s, f in enumerate(terms):
            dims.append(sum(n.dim(g + t) for g in f.gens))
        for s in range(len(terms) - 1):
            src, tgt = terms[s], terms[s + 1]
            mat = zeros(dims[s + 1], dims[s])
            soff = _offsets([n.dim(g + t) for g in src.gens])
            toff = _offsets([n.dim(g + t) for g in tgt.gens])
            for jj, img in enumerate(diffs[s]):
                for kk, elem in enumerate(img):
                    if not elem or not n.dim(src.gens[kk] + t) or not n.dim(tgt.gens[jj] + t):
                        continue
                    a = n.act_elem(elem, src.gens[kk] + t)
                    for r in range(len(a)):
                        for c in range(len(a[r])):
                            mat[toff[jj] + r][soff[kk] + c] += a[r][c]
            mats.append(mat)
        for s in range(len(terms)):
            r_out = rank(mats[s], dims[s]) if s < len(mats) and dims[s] and dims[s + 1] else 0
            r_in = rank(mats[s - 1], dims[s - 1]) if s > 0 and dims[s - 1] and dims[s] else 0
            h = dims[s] - r_out - r_in
            if h:
                out[(s, t)] = h
    return out


def _offsets(sizes):
    out, acc = [], 0
    for n in sizes:
        out.append(acc)
        acc += n
    return out


# -- tensor and Hom ---------------------------------------------------------------

def tensor_fp(m, n):
    if not (isinstance(m, FPModule) and isinstance(n, FPModule)):
        raise UnsupportedModes(f"tensor product needs fp modules, got ({m.mode}, {n.mode})")
    k = m.k
    pairs = [(i, j) for i in range(len(m.gens)) for j in range(len(n.gens))]
    gens = [m.gens[i] + n.gens[j] for i, j in pairs]
    idx = {p: x for x, p in enumerate(pairs)}
    rels = []
    for rel in m.rels:
        for j in range(len(n.gens)):
            r = [dict() for _ in pairs]
            for i, elem in enumerate(rel):
                r[idx[(i, j)]] = dict(elem)
            rels.append(r)
    for rel in n.rels:
        for i in range(len(m.gens)):
            r = [dict() for _ in pairs]
            for j, elem in enumerate(rel):
                r[idx[(i, j)]] = dict(elem)
            rels.append(r)
    return FPModule(k, gens, rels)


def hom_into_dual(m, n):
    """``Hom_R(m, n)`` for ``n = N0^`` as ``(m (x) N0)^``."""
    if not isinstance(n, DualModule):
        raise UnsupportedModes(f"hom_into_dual needs a dual-mode target, got {n.mode}")
    return DualModule(tensor_fp(m, n.base))


def hom_module_maps(p, v, t):
    """Dimension of degree-``t`` module maps ``p -> v`` with ``v`` of finite total dimension.

    Solves the commutation equations directly; independent of any duality.
    """
    vlo, vhi = v.bounds()
    if vlo is None or vhi is None:
        raise WindowInsufficient("target must have finite total dimension")
    degs = [e for e in range(vlo - t, vhi - t + 1) if v.dim(e + t) and p.dim(e)]
    if not degs:
        return 0
    offs, nvar = {}, 0
    for e in degs:
        offs[e] = nvar
        nvar += v.dim(e + t) * p.dim(e)
    dset = set(degs)
    eqs = []
    for e in sorted(dset | {x + 2 for x in dset}):
        pa, pb = p.dim(e), p.dim(e - 2)
        va, vb = v.dim(e + t), v.dim(e + t - 2)
        if not pa or not vb:
            continue
        for j in range(p.k):
            ap = p.act(j, e) if pb else None          # P_e -> P_{e-2}
            av = v.act(j, e + t) if va else None      # V_{e+t} -> V_{e+t-2}
            # (phi_{e-2} ap - av phi_e)[r][c] = 0
            for r in range(vb):
                for c in range(pa):
                    row = [0] * nvar
                    if e - 2 in dset and ap:
                        base = offs[e - 2]
                        for q in range(pb):
                            if ap[q][c]:
                                row[base + r * pb + q] += ap[q][c]
                    if e in dset and av:
                        base = offs[e]
                        for q in range(va):
                            if av[r][q]:
                                row[base + q * pa + c] -= av[r][q]
                    if any(row):
                        eqs.append(row)
    return nvar - (rank(eqs, nvar) if eqs else 0)


# -- JSON --------------------------------------------------------------------------

def elem_to_json(e):
    return [{"coef": str(c), "exp": list(m)} for m, c in sorted(e.items()) if c]


def elem_from_json(data):
    return {tuple(x["exp"]): Fraction(x["coef"]) for x in data}


def module_to_json(m):
    if isinstance(m, FPModule):
        return {"ring": m.k, "mode": "fp", "gens": list(m.gens),
                "rels": [[elem_to_json(e) for e in rel] for rel in m.rels]}
    if isinstance(m, DualModule) and isinstance(m.base, FPModule):
        d = module_to_json(m.base)
        d["mode"] = "dual"
        return d
    if isinstance(m, ShiftModule):
        d = module_to_json(m.base)
        d["shift"] = d.get("shift", 0) + m.n
        return d
    raise UnsupportedModes(f"no JSON form for {m!r}")


def module_from_json(data):
    base = FPModule(data["ring"], data["gens"], [[elem_from_json(e) for e in rel] for rel in data["rels"]])
    m = DualModule(base) if data["mode"] == "dual" else base
    return shift(m, data.get("shift", 0))


class DirectSum(GradedModule):
    def __init__(self, parts, k=None):
        parts = list(parts)
        if k is None:
            if not parts:
                raise ValueError("empty direct sum needs the number of variables")
            k = parts[0].k
        super().__init__(k)
        if any(p.k != k for p in parts):
            raise ValueError("summands over different rings")
        self.parts = parts
        modes = {p.mode for p in parts}
        self.mode = modes.pop() if len(modes) == 1 else "mixed"

    def offsets(self, d):
        return _offsets([p.dim(d) for p in self.parts])

    def _dim(self, d):
        return sum(p.dim(d) for p in self.parts)

    def _act(self, j, d):
        out = zeros(self.dim(d - 2), self.dim(d))
        so, to = self.offsets(d), self.offsets(d - 2)
        for p, a, b in zip(self.parts, so, to):
            m = p.act(j, d)
            for r in range(len(m)):
                for c in range(len(m[r])):
                    out[b + r][a + c] = m[r][c]
        return out

    def bounds(self):
        bs = [p.bounds() for p in self.parts]
        if not bs:
            return (0, 0)
        los = [b[0] for b in bs]
        his = [b[1] for b in bs]
        return (None if None in los else min(los), None if None in his else max(his))


def block_diagonal(mats, rows, cols):
    """Block diagonal matrix from blocks with the given row/column sizes."""
    out = zeros(sum(rows), sum(cols))
    ro, co = 0, 0
    for m, nr, nc in zip(mats, rows, cols):
        for r in range(min(nr, len(m))):
            for c in range(min(nc, len(m[r]))):
                out[ro + r][co + c] = m[r][c]
        ro += nr
        co += nc
    return out


class PolyExtension(GradedModule):
    """``V [x_1..x_q]`` for ``V`` bounded above; the new variables come last.

    Basis of degree ``d``: ``mu (x) v`` with ``mu`` an x-monomial of size ``a``
    and ``|v| = d + 2a``, ordered by ``a``, then ``mu``, then the basis of ``V``.
    """

    def __init__(self, base, q):
        super().__init__(base.k + q)
        self.base, self.q = base, q
        hi = base.bounds()[1]
        if hi is None:
            raise WindowInsufficient("polynomial extension needs a module bounded above")
        self.vhi = hi
        self.mode = base.mode

    def layout(self, d):
        out, off = [], 0
        for a in range(0, (self.vhi - d) // 2 + 1 if self.vhi >= d else 0):
            e = d + 2 * a
            n = self.base.dim(e)
            if not n:
                continue
            for mu in monomials(self.q, a):
                out.append((mu, off, n, e))
                off += n
        return out

    def _dim(self, d):
        return sum(n for _, _, n, _ in self.layout(d))

    def _act(self, j, d):
        src = self.layout(d)
        tgt = {mu: (off, n) for mu, off, n, _ in self.layout(d - 2)}
        out = zeros(self.dim(d - 2), self.dim(d))
        kb = self.base.k
        for mu, off, n, e in src:
            if j >= kb:
                nu = list(mu)
                nu[j - kb] += 1
                toff, _ = tgt[tuple(nu)]
                for i in range(n):
                    out[toff + i][off + i] = 1
            elif mu in tgt and self.base.dim(e - 2):
                m = self.base.act(j, e)
                toff, _ = tgt[mu]
                for r in range(len(m)):
                    for s in range(n):
                        out[toff + r][off + s] = m[r][s]
        return out

    def bounds(self):
        return (None, self.vhi)
