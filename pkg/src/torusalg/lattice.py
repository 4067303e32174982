"""Closed subgroups of the r-torus encoded by their annihilator lattices.

A subgroup ``H`` of ``T^r`` is stored as the lattice ``ann(H)`` of characters
``alpha`` in ``Z^r`` that are trivial on ``H``.  Containment reverses:
``H <= K`` iff ``ann(K) <= ann(H)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import prod


# -- integer normal forms ---------------------------------------------------

def hermite_rows(vectors, n):
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, zero rows
    are dropped.  Equal lattices give identical output.
    """
    rows = [list(v) for v in vectors if any(v)]
    out = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        # gcd-combine the column into a single row
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = []
            for r in live[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                nxt.append(r2)
            rows = [r for r in rows if not r[col]] + [piv] + nxt
            live = [r for r in rows if r[col]]
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        rows = [r for r in rows if not r[col] and any(r)]
        out.append(piv)
        col += 1
    # reduce above pivots
    for i, row in enumerate(out):
        p = next(j for j, a in enumerate(row) if a)
        for k in range(i):
            q = out[k][p] // row[p]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], row)]
    return tuple(tuple(r) for r in out)


def smith(vectors, n):
    """Smith form of the lattice spanned by ``vectors`` (rows) in ``Z^n``.

    Returns ``(divisors, basis)`` where ``basis`` is a Z-basis ``b_1..b_n`` of
    ``Z^n`` such that ``d_i b_i`` (``i < len(divisors)``) is a basis of the
    lattice and ``d_1 | d_2 | ...``.
    """
    # columns of A are the generators; track P with A = P * D * Q
    a = [list(col) for col in zip(*vectors)] if vectors else [[] for _ in range(n)]
    m = len(vectors)
    p = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # columns = basis

    def row_op(i, j, q):  # row_i -= q * row_j  (compensate: col_j of P += q col_i)
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        for r in range(n):
            p[r][j] += q * p[r][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            p[r][i], p[r][j] = p[r][j], p[r][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        for r in range(n):
            p[r][i] = -p[r][i]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(n):
            a[r][i] -= q * a[r][j]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]

    t = 0
    while t < min(n, m):
        nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, m) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        row_swap(t, i)
        col_swap(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:
                        row_swap(t, i)
                        done = False
            for j in range(t + 1, m):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        col_swap(t, j)
                        done = False
            if done:
                bad = [(i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                       if a[i][j] % a[t][t]]
                if bad:
                    i, _ = bad[0]
                    for j in range(m):
                        a[t][j] += a[i][j]
                    for r in range(n):
                        p[r][i] -= p[r][t]
                    done = False
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    divisors = [a[i][i] for i in range(t)]
    basis = [tuple(p[r][i] for r in range(n)) for i in range(n)]
    return divisors, basis


def _lattice_contains(big_hnf, v, n):
    return hermite_rows(list(big_hnf) + [tuple(v)], n) == tuple(big_hnf)


# -- finite abelian groups ----------------------------------------------------

@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple

    def __post_init__(self):
        f = self.invariant_factors
        if any(d < 2 for d in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"not an invariant factor chain: {f}")

    @property
    def order(self):
        return prod(self.invariant_factors)

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "1"


def invariant_factors(orders):
    """Invariant factors of ``Z/n_1 x ... x Z/n_k``."""
    divs, _ = smith([[o if i == j else 0 for j in range(len(orders))]
                     for i, o in enumerate(orders)], len(orders))
    return tuple(d for d in divs if d > 1)


@lru_cache(maxsize=None)
def subgroups_of_finite(orders):
    """All subgroups of ``Z/o_1 x ... x Z/o_k`` as frozensets of tuples (brute force)."""
    orders = tuple(orders)
    elems = list(product(*[range(o) for o in orders]))

    def add(x, y):
        return tuple((a + b) % o for a, b, o in zip(x, y, orders))

    def generated(gens):
        zero = tuple(0 for _ in orders)
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    zero = tuple(0 for _ in orders)
    found = {frozenset([zero])}
    frontier = [frozenset([zero])]
    while frontier:
        nxt = []
        for s in frontier:
            for g in elems:
                if g in s:
                    continue
                t = generated(list(s) + [g]) if len(s) < 64 else None
                if t is None:
                    t = generated([g] + _generators_of(s, add))
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _generators_of(s, add):
    return sorted(s)


# -- characters and representations -------------------------------------------

@dataclass(frozen=True, order=True)
class Character:
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))

    @property
    def rank(self):
        return len(self.alpha)


@dataclass(frozen=True)
class Representation:
    """A complex representation as a sorted multiset of characters."""

    chars: tuple

    def __post_init__(self):
        cs = tuple(sorted(c if isinstance(c, Character) else Character(tuple(c)) for c in self.chars))
        object.__setattr__(self, "chars", cs)

    def __add__(self, other):
        return Representation(self.chars + other.chars)

    def __iter__(self):
        return iter(self.chars)

    def __len__(self):
        return len(self.chars)


# -- subgroups ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Subgroup:
    rank: int
    ann: tuple  # canonical Hermite rows spanning the annihilator lattice

    def __repr__(self):
        return f"Subgroup(rank={self.rank}, ann={[list(r) for r in self.ann]})"

    @cached_property
    def _smith(self):
        return smith(list(self.ann), self.rank)

    @property
    def dim(self):
        return self.rank - len(self.ann)

    @property
    def codim(self):
        return len(self.ann)

    @property
    def is_connected(self):
        return all(d == 1 for d in self._smith[0])

    def to_json(self):
        return {"rank": self.rank, "ann": [list(r) for r in self.ann]}

    @classmethod
    def from_json(cls, data):
        return canonical_subgroup(data["rank"], data["ann"])


def canonical_subgroup(rank, gens):
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if len(g) != rank:
            raise ValueError(f"generator {g} does not have length {rank}")
    return Subgroup(rank, hermite_rows(gens, rank))


def full_torus(rank):
    return Subgroup(rank, ())


def trivial_subgroup(rank):
    return canonical_subgroup(rank, [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)])


def identity_component(h):
    divs, basis = h._smith
    return canonical_subgroup(h.rank, basis[: len(divs)])


def component_group(h):
    return FiniteAbelianGroup(tuple(d for d in h._smith[0] if d > 1))


def contains(big, small):
    """``small <= big`` as subgroups."""
    if big.rank != small.rank:
        raise ValueError("rank mismatch")
    return all(_lattice_contains(small.ann, v, big.rank) for v in big.ann)


def join(a, b):
    """The subgroup generated by ``a`` and ``b`` (annihilator = intersection)."""
    return intersect_lattices(a, b)


def intersect_lattices(a, b):
    from .linalg import nullspace
    n = a.rank
    # x in ann(a) ∩ ann(b): x = u A = v B  ->  solve [A; -B]^T
    A, B = [list(r) for r in a.ann], [list(r) for r in b.ann]
    if not A or not B:
        return full_torus(n)
    stacked = A + [[-x for x in r] for r in B]
    ker = nullspace([list(col) for col in zip(*stacked)], len(stacked))
    # nullspace vectors are a Q-basis; saturate inside Z^{len} via Smith to get all integer solutions
    gens = []
    if ker:
        divs, basis = smith(ker, len(stacked))
        sat = basis[: len(divs)]
        for v in sat:
            gens.append([sum(v[i] * A[i][j] for i in range(len(A))) for j in range(n)])
    return canonical_subgroup(n, gens)


def meet(a, b):
    """Intersection of subgroups (annihilator = sum of lattices)."""
    return canonical_subgroup(a.rank, list(a.ann) + list(b.ann))


def is_cotoral(k, l):
    """``k <= l`` with ``l/k`` a torus."""
    if k.rank != l.rank:
        raise ValueError("rank mismatch")
    if not contains(l, k):
        return False
    # ann(k)/ann(l) torsion free  <=>  ann(l) saturated inside ann(k)
    coords = lattice_coordinates(k, [list(v) for v in l.ann])
    divs, _ = smith(coords, len(k.ann)) if coords else ([], None)
    return all(d == 1 for d in divs)


def lattice_coordinates(h, vectors):
    """Integer coordinates of vectors of ``ann(h)`` in the basis ``char_basis_of_quotient(h)``."""
    from .linalg import solve
    basis = char_basis_of_quotient(h)
    cols = [list(col) for col in zip(*basis)] if basis else [[] for _ in range(h.rank)]
    out = []
    for v in vectors:
        x = solve(cols, len(basis), list(v)) if basis else []
        if x is None or any(c.denominator != 1 for c in x):
            raise ValueError(f"{v} is not in the annihilator of {h}")
        out.append([int(c) for c in x])
    return out


def char_basis_of_quotient(h):
    return [list(r) for r in h.ann]


def is_trivial_on(alpha, h):
    a = alpha.alpha if isinstance(alpha, Character) else tuple(alpha)
    if len(a) != h.rank:
        raise ValueError("length mismatch")
    if not any(a):
        return True
    return _lattice_contains(h.ann, a, h.rank)


def fixed_dimension(rep, h):
    return 2 * sum(1 for c in rep if is_trivial_on(c, h))


def subgroups_between(ktilde):
    """All ``K`` with ``identity_component(ktilde) <= K <= ktilde``."""
    divs, basis = ktilde._smith
    n = ktilde.rank
    sat = basis[: len(divs)]
    nontriv = [(i, d) for i, d in enumerate(divs) if d > 1]
    if not nontriv:
        return [ktilde]
    orders = tuple(d for _, d in nontriv)
    out = []
    for sub in subgroups_of_finite(orders):
        gens = [[d * x for x in sat[i]] for i, d in enumerate(divs)]
        for elt in sub:
            v = [0] * n
            for (i, _), a in zip(nontriv, elt):
                v = [x + a * y for x, y in zip(v, sat[i])]
            gens.append(v)
        out.append(canonical_subgroup(n, gens))
    return sorted(set(out))


def finite_subgroups_of(h, order_bound=None):
    """Subgroups of a finite subgroup ``h``, or of bounded order when ``h`` is not finite."""
    if h.dim == 0:
        n = h.rank
        divs, basis = smith(list(h.ann), n)
        # subgroups of h  <->  lattices between ann(h) and Z^n ; Z^n/ann(h) = prod Z/d_i
        nontriv = [(i, d) for i, d in enumerate(divs) if d > 1]
        orders = tuple(d for _, d in nontriv)
        if not orders:
            return [h]
        out = []
        for sub in subgroups_of_finite(orders):
            gens = [list(r) for r in h.ann]
            for elt in sub:
                v = [0] * n
                for (i, _), a in zip(nontriv, elt):
                    v = [x + a * y for x, y in zip(v, basis[i])]
                gens.append(v)
            out.append(canonical_subgroup(n, gens))
        return sorted(set(out))
    raise ValueError("finite_subgroups_of needs a finite subgroup")


def order(h):
    if h.dim:
        raise ValueError("infinite subgroup")
    return prod(h._smith[0]) if h.ann else 1


def enumerate_subgroups(rank, bound):
    """All subgroups whose canonical annihilator rows have entries in ``[-bound, bound]``.

    A finite universe for truncating infinite families.
    """
    vecs = [v for v in product(range(-bound, bound + 1), repeat=rank) if any(v)]
    found = {full_torus(rank)}
    for k in range(1, rank + 1):
        for combo in _combinations(vecs, k):
            s = canonical_subgroup(rank, combo)
            if len(s.ann) == k and all(abs(x) <= bound for r in s.ann for x in r):
                found.add(s)
    return sorted(found)


def _combinations(vecs, k):
    from itertools import combinations
    return combinations(vecs, k)


def complement_character(small, big):
    """A character ``x`` with ``ann(small) = ann(big) + Z x`` when ``big/small`` is a circle
    quotient direction (``small <= big``, codim one more, ``small * big_1 = big``)."""
    if len(small.ann) != len(big.ann) + 1:
        raise ValueError("codimension must differ by one")
    coords = lattice_coordinates(small, [list(v) for v in big.ann])
    k = len(small.ann)
    divs, basis = smith(coords, k) if coords else ([], [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)])
    if any(d != 1 for d in divs):
        raise ValueError("quotient lattice has torsion")
    cand = basis[len(divs)]
    vec = [sum(cand[i] * small.ann[i][j] for i in range(k)) for j in range(small.rank)]
    # canonical sign/representative: reduce modulo ann(big) by Hermite rows, first nonzero positive
    red = hermite_rows(list(big.ann) + [vec], small.rank)
    for row in red:
        if not _lattice_contains(big.ann, row, small.rank) and hermite_rows(list(big.ann) + [row], small.rank) == red:
            vec = list(row)
            break
    return vec


def complement_characters(small, big):
    """Characters ``x_1..x_q`` with ``ann(small) = ann(big) (+) Z x_1 (+) ... (+) Z x_q``.

    Needs ``small <= big`` with ``big/small`` connected.  For ``q = 1`` this is
    ``complement_character``.
    """
    q = len(small.ann) - len(big.ann)
    if q < 0 or not contains(big, small):
        raise ValueError(f"{small} is not a subgroup of {big} of lower dimension")
    if q == 0:
        return []
    if q == 1:
        return [complement_character(small, big)]
    k = len(small.ann)
    coords = lattice_coordinates(small, [list(v) for v in big.ann])
    divs, basis = smith(coords, k) if coords else ([], [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)])
    if any(d != 1 for d in divs):
        raise ValueError("quotient lattice has torsion")
    out = []
    for cand in basis[len(divs):]:
        out.append([sum(cand[i] * small.ann[i][j] for i in range(k)) for j in range(small.rank)])
    return out
