from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckecov.groups import (AdditiveRationals, ConfigurationError, CyclicGroup, MultiplicativeRationals,
                             SymmetricGroup, divide_action, semidirect_product, trivial_action)

from oracles import bc_inv, bc_mul

S4 = SymmetricGroup(4)
perms = st.sampled_from(S4.elements())
small_rationals = st.fractions(max_denominator=27).filter(lambda q: abs(q) < 50)
powers_of_two = st.integers(-4, 4).map(lambda k: Fraction(2) ** k)

BC2 = semidirect_product(AdditiveRationals((2,)), MultiplicativeRationals((2,)), divide_action,
                         ([Fraction(1), Fraction(1, 2)], [Fraction(2)]))
dyadic = st.tuples(st.integers(-64, 64), st.integers(0, 4)).map(lambda t: Fraction(t[0], 2 ** t[1]))
bc_elements = st.tuples(dyadic, powers_of_two)


def test_symmetric_group_basics():
    g = SymmetricGroup(3)
    assert len(g.elements()) == 6
    assert g.format(g.identity()) == "e"
    assert g.format(g.cycle(0, 1)) == "(1 2)"
    assert g.format(g.cycle(0, 2)) == "(1 3)"
    assert g.mul(g.cycle(0, 1), g.cycle(0, 1)) == g.identity()
    assert g.check_axioms(g.elements())


def test_composition_is_right_to_left():
    g = SymmetricGroup(3)
    a, b = g.cycle(0, 1), g.cycle(1, 2)
    # (a b)(2) = a(b(2)) = a(1) = 0
    assert g.mul(a, b)[2] == 0


@given(perms, perms, perms)
def test_permutation_axioms(a, b, c):
    g = S4
    assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))
    assert g.mul(a, g.inv(a)) == g.identity()
    assert g.mul(g.identity(), a) == a


def test_cyclic_group():
    g = CyclicGroup(4)
    assert g.elements() == [0, 1, 2, 3]
    assert g.mul(3, 3) == 2 and g.inv(1) == 3
    assert g.check_axioms(g.elements())


def test_rational_groups_membership():
    z = AdditiveRationals(())
    z2 = AdditiveRationals((2,))
    q = AdditiveRationals(None)
    assert z.contains(Fraction(3)) and not z.contains(Fraction(1, 2))
    assert z2.contains(Fraction(3, 8)) and not z2.contains(Fraction(1, 3))
    assert q.contains(Fraction(5, 21))
    m = MultiplicativeRationals((3,))
    assert m.contains(Fraction(1, 9)) and not m.contains(Fraction(2)) and not m.contains(Fraction(-3))


@given(bc_elements, bc_elements, bc_elements)
def test_semidirect_law_matches_independent_copy(x, y, z):
    assert BC2.mul(x, y) == bc_mul(x, y)
    assert BC2.inv(x) == bc_inv(x)
    assert BC2.mul(BC2.mul(x, y), z) == BC2.mul(x, BC2.mul(y, z))
    assert BC2.mul(x, BC2.inv(x)) == BC2.identity()


def test_semidirect_formula():
    x = (Fraction(1, 2), Fraction(2))
    y = (Fraction(3), Fraction(1, 4))
    # (n1, q1)(n2, q2) = (n1 + n2/q1, q1 q2)
    assert BC2.mul(x, y) == (Fraction(1, 2) + Fraction(3, 2), Fraction(1, 2))
    assert BC2.format((Fraction(1, 2), Fraction(2))) == "(1/2,2)"


def test_semidirect_rejects_action_outside_n():
    # dividing by 3 leaves Z[1/2]
    with pytest.raises(ConfigurationError):
        semidirect_product(AdditiveRationals((2,)), MultiplicativeRationals((3,)), divide_action,
                           ([Fraction(1)], [Fraction(3)]))


def test_trivial_action_is_direct_product():
    g = semidirect_product(AdditiveRationals(()), MultiplicativeRationals((2,)), trivial_action,
                           ([Fraction(1)], [Fraction(2)]))
    x, y = (Fraction(1), Fraction(2)), (Fraction(3), Fraction(1, 2))
    assert g.mul(x, y) == g.mul(y, x) == (Fraction(4), Fraction(1))


@given(small_rationals, small_rationals)
def test_additive_rationals_axioms(a, b):
    q = AdditiveRationals(None)
    assert q.mul(a, b) == a + b and q.mul(a, q.inv(a)) == q.identity()
