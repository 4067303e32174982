import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torusalg import graded as gr
from torusalg.graded import (DualModule, FPModule, WindowInsufficient, cokernel, ext_over_poly,
                             fp_map, free_module, free_resolution, graded_dual, hom_into_dual,
                             hom_module_maps, kernel, koszul_complex, localized_piece,
                             quotient_by_monomials, shift, zero_map)

from gen import random_torsion, total_dim


def residue_field(k):
    return quotient_by_monomials(k, [1] * k)


# -- pieces ------------------------------------------------------------------------------

def test_piece_examples():
    assert free_module(1).dim(-4) == 1
    m = quotient_by_monomials(1, [2])
    assert m.pieces(-10, 10) == {0: 1, -2: 1}
    assert free_module(2).dim(-6) == 4


@given(st.integers(0, 4), st.integers(0, 8))
def test_poincare_series(k, i):
    want = comb(i + k - 1, k - 1) if k else (1 if i == 0 else 0)
    assert free_module(k).dim(-2 * i) == want


def test_monomial_quotient_dimension():
    m = quotient_by_monomials(2, [2, 3])
    assert total_dim(m) == 6
    assert m.is_torsion()


# -- kernel / cokernel ----------------------------------------------------------------------

def test_multiplication_by_c():
    r = free_module(1)
    f = fp_map(FPModule(1, (-2,)), r, [r.project(-2, [1])])
    assert kernel(f).is_zero_on(-10, 10)
    assert cokernel(f).pieces(-10, 10) == {0: 1}


def test_zero_map():
    m, n = quotient_by_monomials(1, [2]), quotient_by_monomials(1, [3])
    z = zero_map(m, n)
    assert kernel(z).pieces(-8, 8) == m.pieces(-8, 8)
    assert cokernel(z).pieces(-8, 8) == n.pieces(-8, 8)


def test_koszul_syzygy():
    # (c1, c2): R(-2)^2 -> R, generators in degree -2 map to c1, c2
    src = FPModule(2, (-2, -2))
    tgt = free_module(2)
    f = fp_map(src, tgt, [tgt.project(-2, [1, 0]), tgt.project(-2, [0, 1])])
    assert cokernel(f).pieces(-12, 4) == {0: 1}
    ker = kernel(f)
    assert ker.pieces(-12, 4) == {d: free_module(2).dim(d + 4) for d in range(-12, -3, 2)}


# -- duality ----------------------------------------------------------------------------------

def test_dual_examples():
    d = graded_dual(free_module(1))
    assert [d.dim(x) for x in range(0, 9, 2)] == [1] * 5 and d.dim(-2) == 0
    assert graded_dual(quotient_by_monomials(1, [2])).pieces(-6, 6) == {0: 1, 2: 1}
    m = quotient_by_monomials(1, [3])
    dd = graded_dual(graded_dual(m))
    assert dd.pieces(-8, 8) == m.pieces(-8, 8)
    for d in range(-6, 2):
        assert dd.act(0, d) == m.act(0, d)


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_double_dual_actions(seed, k):
    m = random_torsion(random.Random(seed), k)
    dd = graded_dual(graded_dual(m))
    lo, hi = m.bounds()
    for d in range(lo, hi + 3):
        assert dd.dim(d) == m.dim(d)
        for j in range(k):
            assert dd.act(j, d) == m.act(j, d)


# -- Koszul and Ext --------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_koszul_complex(k):
    kc = koszul_complex(k)
    assert kc.ranks() == [comb(k, i) for i in range(k + 1)]
    assert kc.check_d2(-12, 2)
    for i in range(k + 1):
        for d in range(-12, 3):
            assert kc.homology(i, d) == (1 if (i, d) == (0, 0) else 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ext_residue_field(k):
    e = ext_over_poly(residue_field(k), residue_field(k), (-10, 10))
    by_s = {}
    for (s, _t), v in e.items():
        by_s[s] = by_s.get(s, 0) + v
    assert by_s == {s: comb(k, s) for s in range(k + 1)}


def test_ext_into_injective():
    r = free_module(1)
    e = ext_over_poly(residue_field(1), DualModule(r), (-10, 10))
    assert e == {(0, 0): 1}


def test_ext_torsion_example():
    m = FPModule(2, (0, -2), [[{(1, 0): 1}, {}], [{(0, 1): 1}, {}], [{}, {(1, 0): 1}], [{}, {(0, 1): 1}]])
    assert free_resolution(m).betti() == [2, 4, 2]


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_ext0_is_hom(seed, k):
    rng = random.Random(seed)
    m, n = random_torsion(rng, k, 6), random_torsion(rng, k, 6)
    e = ext_over_poly(m, n, (-8, 8))
    for t in range(-8, 9):
        assert e.get((0, t), 0) == hom_module_maps(m, n, t)


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_betti_numbers_from_koszul(seed, k):
    """``Tor_s(M, Q)`` from the Koszul complex equals the minimal Betti numbers."""
    m = random_torsion(random.Random(seed), k, 8)
    betti = free_resolution(m).betti()
    dual_ext = ext_over_poly(m, residue_field(k), (-30, 30))
    by_s = {}
    for (s, _t), v in dual_ext.items():
        by_s[s] = by_s.get(s, 0) + v
    assert [by_s.get(s, 0) for s in range(len(betti))] == betti


# -- Hom into duals ---------------------------------------------------------------------------

def test_hom_into_dual_examples():
    r1 = free_module(1)
    h = hom_into_dual(r1, DualModule(r1))
    assert [h.dim(x) for x in range(0, 9, 2)] == [1] * 5
    assert hom_into_dual(quotient_by_monomials(1, [2]), DualModule(r1)).pieces(-6, 6) == {0: 1, 2: 1}
    h2 = hom_into_dual(FPModule(2, (0,), [[{(1, 0): 1}]]), DualModule(free_module(2)))
    assert [h2.dim(x) for x in range(0, 9, 2)] == [1] * 5


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_hom_into_dual_matches_direct_solve(seed, k):
    rng = random.Random(seed)
    m, n0 = random_torsion(rng, k, 6), random_torsion(rng, k, 6)
    h = hom_into_dual(m, DualModule(n0))
    for t in range(-10, 11):
        assert h.dim(t) == hom_module_maps(m, DualModule(n0), t)


@given(st.integers(0, 10**6))
def test_hom_into_dual_of_ring_is_dual(seed):
    m = random_torsion(random.Random(seed), 2)
    h = hom_into_dual(m, DualModule(free_module(2)))
    d = graded_dual(m)
    assert h.pieces(-12, 12) == d.pieces(-12, 12)


# -- localization --------------------------------------------------------------------------

def test_localized_examples():
    r = free_module(1)
    assert all(localized_piece(r, [[1]], 2 * i) == 1 for i in range(-8, 9))
    assert localized_piece(quotient_by_monomials(1, [2]), [[1]], 0) == 0


def test_localized_infinite_piece_is_reported():
    # degree -2 of Q[c1^{+-1}, c2] contains c1^{a} c2^{b} for every a + b = 1, b >= 0
    with pytest.raises(WindowInsufficient):
        localized_piece(free_module(2), [[1, 0]], -2)


# -- JSON ------------------------------------------------------------------------------------------

@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    m = random_torsion(random.Random(seed), 2)
    for obj in (m, DualModule(m), shift(m, 4)):
        back = gr.module_from_json(gr.module_to_json(obj))
        assert back.pieces(-20, 20) == obj.pieces(-20, 20)
