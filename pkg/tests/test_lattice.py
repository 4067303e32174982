import json
import random
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from torusalg.lattice import (Character, FiniteAbelianGroup, Representation, Subgroup,
                              canonical_subgroup, char_basis_of_quotient, component_group,
                              contains, enumerate_subgroups, fixed_dimension, full_torus,
                              hermite_rows, identity_component, invariant_factors, is_cotoral,
                              is_trivial_on, join, meet, order, smith, subgroups_between,
                              subgroups_of_finite, trivial_subgroup)

from gen import count_sublattices


def vec(rank):
    return st.lists(st.integers(-6, 6), min_size=rank, max_size=rank)


@st.composite
def generator_sets(draw, rank=None):
    r = rank or draw(st.integers(1, 3))
    return r, draw(st.lists(vec(r), min_size=0, max_size=4))


@st.composite
def subgroups(draw, rank=None):
    r, gens = draw(generator_sets(rank))
    return canonical_subgroup(r, gens)


def unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        m[i] = [a + q * b for a, b in zip(m[i], m[j])]
    return m


# -- canonical form -------------------------------------------------------------------

def test_examples_canonical():
    assert canonical_subgroup(1, [[0]]) == full_torus(1)
    z2 = canonical_subgroup(1, [[2]])
    assert z2.dim == 0 and component_group(z2).invariant_factors == (2,)
    h = canonical_subgroup(2, [[2, 4], [6, 8]])
    assert component_group(h).invariant_factors == (2, 4)
    assert component_group(canonical_subgroup(2, [[2, 0], [0, 3]])).invariant_factors == (6,)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        canonical_subgroup(2, [[1, 2, 3]])


@given(generator_sets())
def test_hermite_idempotent(data):
    r, gens = data
    h = hermite_rows(gens, r)
    assert hermite_rows(h, r) == h


@given(generator_sets(), st.integers(0, 10**6))
def test_encoding_unique(data, seed):
    r, gens = data
    if not gens:
        return
    u = unimodular(random.Random(seed), len(gens))
    mixed = [[sum(u[i][k] * gens[k][j] for k in range(len(gens))) for j in range(r)]
             for i in range(len(gens))]
    assert canonical_subgroup(r, mixed) == canonical_subgroup(r, gens)


@given(generator_sets())
def test_smith_against_sympy(data):
    r, gens = data
    divs, basis = smith(gens, r)
    nz = [g for g in gens if any(g)]
    if nz:
        d = smith_normal_form(Matrix(nz), domain=ZZ)
        want = [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]
    else:
        want = []
    assert divs == want
    # basis is unimodular
    assert abs(Matrix([list(b) for b in basis]).det()) == 1


@given(generator_sets())
def test_first_divisor_is_content(data):
    r, gens = data
    divs, _ = smith(gens, r)
    g = 0
    for row in gens:
        for x in row:
            g = gcd(g, x)
    assert (divs[0] if divs else 0) == g


# -- structure ---------------------------------------------------------------------------

def test_identity_component_examples():
    assert identity_component(canonical_subgroup(1, [[2]])) == trivial_subgroup(1)
    assert identity_component(full_torus(3)) == full_torus(3)
    assert identity_component(canonical_subgroup(2, [[2, 0], [0, 1]])) == trivial_subgroup(2)


@given(subgroups())
def test_identity_component_properties(h):
    h1 = identity_component(h)
    assert h1.is_connected
    assert identity_component(h1) == h1
    assert contains(h, h1)
    assert h1.dim == h.dim
    assert is_cotoral(h1, h1)
    if component_group(h).order <= 64:
        assert len(subgroups_between(h)) == count_sublattices(component_group(h).invariant_factors or (1,))


@given(subgroups())
def test_component_group_order(h):
    cg = component_group(h)
    divs, _ = smith(list(h.ann), h.rank)
    assert cg.order == prod(divs) if h.ann else cg.order == 1


@given(subgroups(2), subgroups(2))
def test_meet_join_laws(a, b):
    m, j = meet(a, b), join(a, b)
    assert contains(a, m) and contains(b, m)
    assert contains(j, a) and contains(j, b)
    assert meet(a, b) == meet(b, a) and join(a, b) == join(b, a)
    assert meet(a, j) == a and join(a, m) == a


@settings(max_examples=60)
@given(subgroups(2), subgroups(2), subgroups(2))
def test_cotoral_transitive(a, b, c):
    if is_cotoral(a, b) and is_cotoral(b, c):
        assert is_cotoral(a, c)


def test_cotoral_examples():
    t1 = trivial_subgroup(1)
    z2 = canonical_subgroup(1, [[2]])
    assert is_cotoral(t1, full_torus(1))
    assert is_cotoral(z2, full_torus(1))
    assert not is_cotoral(t1, z2)
    with pytest.raises(ValueError):
        is_cotoral(t1, full_torus(2))


# -- enumeration -------------------------------------------------------------------------

def test_subgroups_between_examples():
    assert subgroups_between(trivial_subgroup(2)) == [trivial_subgroup(2)]
    assert len(subgroups_between(canonical_subgroup(1, [[2]]))) == 2
    assert len(subgroups_between(canonical_subgroup(2, [[2, 0], [0, 2]]))) == 5


@pytest.mark.parametrize("divs", [(2,), (4,), (6,), (2, 2), (2, 4), (3, 3), (2, 6), (4, 4), (2, 2, 2),
                                  (64,), (2, 32), (4, 16), (8, 8), (2, 2, 16), (2, 4, 8), (4, 4, 4),
                                  (2, 2, 2, 8), (2, 2, 4, 4)])
def test_subgroups_between_count_to_64(divs):
    n = len(divs)
    k = canonical_subgroup(n, [[d if i == j else 0 for j in range(n)] for i, d in enumerate(divs)])
    subs = subgroups_between(k)
    assert len(subs) == count_sublattices(divs) == len(subgroups_of_finite(divs))
    assert all(identity_component(s) == identity_component(k) and contains(k, s) for s in subs)


@given(subgroups(2))
def test_subgroups_between_circle_levels(h):
    if component_group(h).order > 64:
        return
    for s in subgroups_between(h):
        assert s.dim == h.dim and contains(h, s)


def test_enumerate_subgroups_contains_basics():
    subs = enumerate_subgroups(2, 1)
    assert full_torus(2) in subs and trivial_subgroup(2) in subs
    assert all(abs(x) <= 1 for s in subs for row in s.ann for x in row)


def test_invariant_factors():
    assert invariant_factors((2, 3)) == (6,)
    assert invariant_factors((4, 6)) == (2, 12)
    with pytest.raises(ValueError):
        FiniteAbelianGroup((4, 2))


# -- characters ------------------------------------------------------------------------

def test_is_trivial_on_examples():
    z2 = canonical_subgroup(1, [[2]])
    assert is_trivial_on(Character((2,)), z2)
    assert not is_trivial_on(Character((1,)), z2)
    assert is_trivial_on((0, 0), canonical_subgroup(2, [[1, 3]]))


def test_fixed_dimension_examples():
    t1 = trivial_subgroup(1)
    z2 = canonical_subgroup(1, [[2]])
    assert fixed_dimension(Representation([(1,)]), t1) == 2
    assert fixed_dimension(Representation([(1,)]), z2) == 0
    assert fixed_dimension(Representation([(1,), (2,)]), z2) == 2


@given(subgroups(), st.data())
def test_fixed_dimension_even(h, data):
    chars = data.draw(st.lists(vec(h.rank), max_size=4))
    v = fixed_dimension(Representation(chars), h)
    assert v % 2 == 0 and 0 <= v <= 2 * len(chars)


@given(subgroups(2), st.data())
def test_trivial_on_subgroup_inherits(h, data):
    """A character trivial on ``h`` is trivial on every subgroup of ``h``."""
    alpha = data.draw(vec(2))
    sub = meet(h, data.draw(subgroups(2)))
    if is_trivial_on(alpha, h):
        assert is_trivial_on(alpha, sub)


def test_char_basis_examples():
    assert char_basis_of_quotient(trivial_subgroup(3)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert char_basis_of_quotient(canonical_subgroup(1, [[2]])) == [[2]]
    assert char_basis_of_quotient(full_torus(2)) == []


def test_order_and_json():
    h = canonical_subgroup(2, [[2, 0], [0, 3]])
    assert order(h) == 6
    assert Subgroup.from_json(json.loads(json.dumps(h.to_json()))) == h
    with pytest.raises(ValueError):
        order(full_torus(1))
