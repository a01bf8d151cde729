import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckecov.hecke import (HeckeElement, check_mult_identity, convolve, involution, product_counting_value,
                            structure_constants)
from heckecov.instances import bc_one_prime, s3_a3, s3_s2, s4_s3, z4_normal
from heckecov.scalars import Scalar
from heckecov.semigroup import conjugate_cosets, e_map

import oracles

FINITE = [s3_s2, s4_s3, z4_normal, s3_a3]


def random_element(pair, keys, rng):
    return HeckeElement(pair, {k: Scalar(rng.randint(-3, 3), rng.randint(-2, 2)) for k in rng.sample(keys, min(3, len(keys)))})


def test_s3_s2_square_of_the_generator():
    pair = s3_s2()
    g = pair.group
    T = HeckeElement.basis(pair, g.cycle(0, 2))
    one = HeckeElement.unit(pair)
    assert T * T == one * 2 + T
    assert product_counting_value(pair, g.cycle(0, 2), g.cycle(0, 2), g.identity()) == 2
    assert product_counting_value(pair, g.identity(), g.identity(), g.identity()) == 1
    table = structure_constants(pair, [k.rep for k in pair.double_cosets()])
    assert table.coefficient(g.cycle(0, 2), g.cycle(0, 2), g.identity()) == 2
    assert table.coefficient(g.cycle(0, 2), g.cycle(0, 2), g.cycle(0, 2)) == 1
    assert table[g.identity(), g.cycle(0, 2)] == {pair.double_coset_key(g.cycle(0, 2)): 1}


@pytest.mark.parametrize("build", FINITE)
def test_structure_constants_match_convolution_oracle(build):
    pair = build()
    g = pair.group
    H = oracles.subgroup(g, pair.in_h)
    keys = pair.double_cosets()
    table = structure_constants(pair, [k.rep for k in keys])
    for a in keys:
        for b in keys:
            brute = {pair.double_coset_key(next(iter(D))): c for D, c in
                     oracles.hecke_product_brute(g, H, a.rep, b.rep).items()}
            assert table[a, b] == brute
            for z in keys:
                n = oracles.product_count_brute(g, H, a.rep, b.rep, z.rep)
                assert product_counting_value(pair, a, b, z.rep) == n == table.coefficient(a, b, z)


@pytest.mark.parametrize("build", FINITE)
def test_algebra_axioms_finite(build):
    pair = build()
    keys = pair.double_cosets()
    one = HeckeElement.unit(pair)
    rng = random.Random(7)
    for _ in range(15):
        f, h, k = (random_element(pair, keys, rng) for _ in range(3))
        assert (f * h) * k == f * (h * k)
        assert one * f == f == f * one
        assert (f * h).star() == h.star() * f.star()
        assert f.star().star() == f
        assert f * (h + k) == f * h + f * k
    for a in keys:
        assert HeckeElement.basis(pair, a).star() == HeckeElement.basis(pair, pair.group.inv(a.rep))
        for b in keys:
            prod = HeckeElement.basis(pair, a) * HeckeElement.basis(pair, b)
            assert all(v.is_rational() and v.as_fraction().denominator == 1 and v.as_fraction() > 0
                       for _, v in prod.items())


BC2 = bc_one_prime(2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_algebra_axioms_bc(seed):
    pair = BC2.pair
    rng = random.Random(seed)
    a, b, c = (BC2.sample(rng) for _ in range(3))
    A, B, C = (HeckeElement.basis(pair, x) for x in (a, b, c))
    assert (A * B) * C == A * (B * C)
    assert (A * B).star() == B.star() * A.star()
    one = HeckeElement.unit(pair)
    assert one * A == A == A * one
    assert all(v.is_rational() and v.as_fraction().denominator == 1 for _, v in (A * B).items())
    for z in (A * B).support:
        assert (A * B)[z.rep] == product_counting_value(pair, a, b, z.rep)


def test_involution_and_unit():
    pair = s4_s3()
    one = HeckeElement.unit(pair)
    assert one.star() == one
    f = HeckeElement(pair, {pair.double_cosets()[1]: Scalar(1, 2)})
    assert involution(pair, f)[pair.double_cosets()[1].rep] == Scalar(1, -2)
    assert convolve(pair, one, f) == f


def test_mult_identity():
    pair = s3_s2()
    g = pair.group
    rep = check_mult_identity(pair, g.identity(), g.cycle(0, 2))
    assert rep.passed and rep.details["hypothesis"] and rep.details["equal"]
    rep = check_mult_identity(pair, g.cycle(0, 2), g.cycle(0, 2))
    assert rep.passed and not rep.details["hypothesis"]
    # on bc-one-prime: a = s^-1 n, b = m t lands in a single double coset
    F = Fraction
    p = 2
    g = BC2.group
    s, t = (F(0), F(p)), (F(0), F(p * p))
    a = g.mul(g.inv(s), (F(1, 2), F(1)))
    b = g.mul((F(3, 4), F(1)), t)
    rep = check_mult_identity(BC2.pair, a, b)
    assert rep.details["hypothesis"] and rep.details["equal"]
    assert rep.details["coefficient"] == str(F(BC2.pair.R(t), BC2.pair.R(g.mul(g.inv(s), t))))


def test_msms_on_bc():
    pair = BC2.pair
    g = BC2.group
    for s in ((Fraction(0), Fraction(2)), (Fraction(0), Fraction(4))):
        lhs = HeckeElement.basis(pair, s) * HeckeElement.basis(pair, g.inv(s))
        rhs = HeckeElement(pair, {})
        for m in conjugate_cosets(BC2, s):
            rhs = rhs + e_map(BC2, m.rep)
        assert lhs == rhs and len(conjugate_cosets(BC2, s)) == pair.R(s)


def test_structure_table_on_bc():
    pair = BC2.pair
    F = Fraction
    s, si = (F(0), F(2)), (F(0), F(1, 2))
    table = structure_constants(pair, [s, si])
    # [Hs^-1 H][HsH] = R(s)[H]
    assert table[si, s] == {pair.double_coset_key((F(0), F(1))): 2}
    assert table[s, si] == {pair.double_coset_key((F(0), F(1))): 1, pair.double_coset_key((F(1, 2), F(1))): 1}
