from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckecov.instances import bc_one_prime, s3_a3, s3_s2, s4_s3, z4_normal
from heckecov.pair import (HeckePair, OrbitCapExceeded, coset_count_R, left_cosets_in_double_coset,
                           same_double_coset, same_left_coset)

import oracles

FINITE = [s3_s2, s4_s3, z4_normal, s3_a3]
BC2 = bc_one_prime(2)
BC3 = bc_one_prime(3)


def test_s3_s2_examples():
    pair = s3_s2()
    g = pair.group
    e, t12, t13, t23 = g.identity(), g.cycle(0, 1), g.cycle(0, 2), g.cycle(1, 2)
    assert same_left_coset(pair, e, t12)
    assert not same_left_coset(pair, e, t13)
    assert all(same_left_coset(pair, x, x) for x in g.elements())
    assert left_cosets_in_double_coset(pair, e) == [pair.coset_key(e)]
    assert len(left_cosets_in_double_coset(pair, t13)) == 2
    assert coset_count_R(pair, e) == 1 and coset_count_R(pair, t13) == 2
    assert same_double_coset(pair, t13, t23)
    assert not same_double_coset(pair, t13, e)
    assert len(pair.cosets()) == 3
    assert [pair.R(d) for d in pair.double_cosets()] == [1, 2]


@pytest.mark.parametrize("build", FINITE)
def test_finite_cosets_match_set_oracle(build):
    pair = build()
    g = pair.group
    H = oracles.subgroup(g, pair.in_h)
    assert set(pair.h_elements) == H
    assert len(pair.cosets()) == len(oracles.all_left_cosets(g, H))
    assert len(pair.double_cosets()) == len(oracles.all_double_cosets(g, H))
    for x in g.elements():
        assert pair.R(x) == oracles.R_brute(g, H, x)
        D = oracles.double_coset(g, H, x)
        assert pair.L(x) == len(oracles.cosets_inside(g, H, D))
        for y in g.elements():
            assert same_left_coset(pair, x, y) == (oracles.left_coset(g, H, x) == oracles.left_coset(g, H, y))
            assert same_double_coset(pair, x, y) == (y in D)


@pytest.mark.parametrize("build", FINITE)
def test_double_coset_keys_are_canonical(build):
    pair = build()
    g = pair.group
    H = pair.h_elements
    for x in g.elements():
        k = pair.double_coset_key(x)
        assert all(pair.double_coset_key(g.prod(h1, x, h2)) == k for h1 in H for h2 in H)


def test_normal_pairs_have_trivial_R():
    for build in (z4_normal, s3_a3):
        pair = build()
        assert all(pair.R(x) == 1 and pair.L(x) == 1 for x in pair.group.elements())
        assert pair.is_normal_on(pair.group.elements())
    assert not s3_s2().is_normal_on(s3_s2().group.elements())


def test_bc_window_matches_independent_enumeration():
    inst = bc_one_prime(2, window=2, q_exp=2)
    pair = inst.pair
    brute = oracles.bc_window_cosets(2, 2, 2)
    assert len(brute) == 31
    assert {pair.coset_key(x) for x in inst.window} == {pair.coset_key(x) for x in brute}
    assert len(set(pair.coset_key(x) for x in inst.window)) == len(inst.window)


@pytest.mark.parametrize("inst", [BC2, BC3], ids=["p=2", "p=3"])
def test_bc_R_and_L_match_element_scan(inst):
    p = inst.params["p"]
    pair = inst.pair
    F = Fraction
    xs = [(F(0), F(p)), (F(0), F(1, p)), (F(1, p * p), F(p ** 3)), (F(1, p), F(1)), (F(3, p), F(1, p * p)),
          (F(0), F(p * p))]
    for x in xs:
        assert pair.R(x) == oracles.bc_R_brute(x)
        assert pair.L(x) == oracles.bc_left_cosets_in_double_brute(x)
    # R counts the right cosets of HxH: R((0,p)) = p while H(0,p)H is a single left coset
    assert pair.R((F(0), F(p))) == p
    assert len(pair.left_cosets((F(0), F(p)))) == 1
    assert len(pair.left_cosets((F(0), F(1, p)))) == p


@settings(max_examples=60, deadline=None)
@given(st.integers(-40, 40), st.integers(0, 3), st.integers(-2, 2), st.integers(-40, 40), st.integers(0, 3),
       st.integers(-2, 2), st.integers(-40, 40), st.integers(0, 3))
def test_R_ignores_n_in_the_middle(a, da, ka, b, db, kb, c, dc):
    # R(x n y) = R(x y) for n in N
    g = BC2.group
    x = (Fraction(a, 2 ** da), Fraction(2) ** ka)
    y = (Fraction(b, 2 ** db), Fraction(2) ** kb)
    n = (Fraction(c, 2 ** dc), Fraction(1))
    assert BC2.pair.R(g.prod(x, n, y)) == BC2.pair.R(g.mul(x, y))


def test_orbit_cap_is_enforced():
    inst = bc_one_prime(2)
    pair = HeckePair(inst.group, inst.pair.h_generators, inst.pair.in_h, coset_rep=inst.pair._coset_rep,
                     orbit_cap=3)
    with pytest.raises(OrbitCapExceeded, match="not-a-Hecke-double-coset"):
        pair.R((Fraction(0), Fraction(16)))


def test_hash_and_order_of_keys():
    pair = BC2.pair
    a = pair.coset_key((Fraction(1, 2), Fraction(2)))
    b = pair.coset_key((Fraction(3, 2), Fraction(2)))
    assert a == b and hash(a) == hash(b)
    assert sorted([pair.coset_key((Fraction(0), Fraction(4))), pair.coset_key((Fraction(0), Fraction(1)))])
