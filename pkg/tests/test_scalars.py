from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heckecov.scalars import Scalar, square_decompose

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicands = st.sampled_from([1, 2, 3, 5, 6, 10, 15, 30])


@st.composite
def scalars(draw):
    s = Scalar()
    for _ in range(draw(st.integers(0, 3))):
        d = draw(radicands)
        term = Scalar(draw(rationals), draw(rationals)) * Scalar.sqrt(d)
        s = s + term
    return s


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Scalar()
    assert a * 1 == a and a + 0 == a


@given(scalars(), scalars())
def test_conjugation(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.abs2().is_real()
    assert a.abs2().sign() >= 0
    assert (a.abs2().sign() == 0) == (not a)


@given(scalars())
def test_inverse(a):
    if a:
        assert a * a.inverse() == Scalar(1)
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@given(scalars())
def test_text_round_trip(a):
    assert Scalar.parse(str(a)) == a


def test_text_examples():
    assert str(Scalar()) == "0"
    assert str(Scalar(Fraction(3, 4))) == "3/4"
    assert str(Scalar(0, Fraction(-1, 2))) == "-i*1/2"
    assert Scalar.parse("1+2*sqrt(3)-i*5/7*sqrt(6)") == 1 + 2 * Scalar.sqrt(3) - Scalar(0, Fraction(5, 7)) * Scalar.sqrt(6)
    with pytest.raises(ValueError):
        Scalar.parse("sqrt(8)")


def test_sqrt_normalisation():
    assert square_decompose(72) == (6, 2)
    assert Scalar.sqrt(12) == 2 * Scalar.sqrt(3)
    assert Scalar.sqrt(Fraction(1, 2)) * Scalar.sqrt(2) == Scalar(1)
    assert Scalar.sqrt(Fraction(8, 3)) ** 2 == Scalar(Fraction(8, 3))
    assert Scalar.sqrt(9) == Scalar(3)
    assert Scalar(0, 1) * Scalar(0, 1) == Scalar(-1)
    with pytest.raises(ValueError):
        Scalar.sqrt(-1)


@given(st.fractions(min_value=0, max_value=50, max_denominator=20))
def test_sqrt_squares_back(q):
    r = Scalar.sqrt(q)
    assert r * r == Scalar(q)
    assert r.sign() >= 0


def test_exact_sign_of_radical_sums():
    # sqrt(2) + sqrt(3) - sqrt(10) < 0 since 5 + 2 sqrt 6 < 10
    assert (Scalar.sqrt(2) + Scalar.sqrt(3) - Scalar.sqrt(10)).sign() == -1
    assert (Scalar.sqrt(2) + Scalar.sqrt(3) - Scalar.sqrt(9)).sign() == 1
    assert (3 * Scalar.sqrt(2) - Scalar.sqrt(18)).sign() == 0
