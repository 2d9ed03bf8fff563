from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from a22ps.exact import I, ONE, ZERO, QuarterInt, Scalar, format_fraction, i_power

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
scalars = st.builds(Scalar, fractions, fractions)


def test_quarter_int_basics():
    q = QuarterInt.of("-3/4")
    assert q.numerator == -3
    assert str(q) == "-3/4"
    assert str(QuarterInt(-4)) == "-1"
    assert QuarterInt.of(Fraction(1, 2)).numerator == 2
    assert q.mod_one() == QuarterInt(1)
    assert q.mod_half() == QuarterInt(1)
    assert QuarterInt(8).is_integer() and not q.is_integer()
    assert q + QuarterInt(2) == QuarterInt(-1)
    assert QuarterInt(-3) < QuarterInt(-1)


def test_quarter_int_rejects_non_quarters():
    with pytest.raises(ValueError):
        QuarterInt.of(Fraction(1, 3))


@given(st.integers(-100, 100), st.integers(-100, 100))
def test_quarter_int_order_matches_fractions(a, b):
    qa, qb = QuarterInt(a), QuarterInt(b)
    assert (qa < qb) == (Fraction(a, 4) < Fraction(b, 4))
    assert (qa + qb).to_fraction() == Fraction(a + b, 4)


@given(scalars, scalars, scalars)
def test_scalar_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * (ONE / a) == ONE
    assert a - a == ZERO


def test_scalar_rendering_and_units():
    assert str(I) == "i"
    assert str(-I) == "-i"
    assert str(Scalar(Fraction(1, 2), -1)) == "1/2-i"
    assert I * I == -ONE
    assert [i_power(n) for n in range(4)] == [ONE, I, -ONE, -I]
    assert i_power(-1) == -I
    assert format_fraction(Fraction(-6, 4)) == "-3/2"


def test_scalar_canonical_form():
    s = Scalar(Fraction(2, 4), Fraction(-3, 6))
    assert s.re == Fraction(1, 2) and s.im == Fraction(-1, 2)
    assert hash(s) == hash(Scalar(Fraction(1, 2), Fraction(-1, 2)))
