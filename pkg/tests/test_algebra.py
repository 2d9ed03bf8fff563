import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from a22ps.algebra import (IDENTITY, Element, Mode, NormalMonomial, Root, alpha2_mode, bracket, bracket_coeff,
                           normal_order, parse_monomial, psi, render_monomial, tau, x1, x12)
from a22ps.exact import I, ONE, QuarterInt, Scalar, i_power


def closed_form_coefficient(q: int) -> Scalar:
    """-(i/4)(i^(-4m) - (-i)^(-4m)) at m = q/4."""
    return Scalar(0, Fraction(-1, 4)) * (i_power(-q) - (-I) ** (-q))


def mono(a1=(), a12=()):
    return Element.monomial(NormalMonomial.make(a1, a12))


# quarter-unit degrees drawn from [-5, 5]
a1_degrees = st.integers(-10, 9).map(lambda n: 2 * n + 1).filter(lambda q: -20 <= q <= 20)
a12_degrees = st.integers(-5, 5).map(lambda n: 4 * n)
modes = st.one_of(a1_degrees.map(lambda q: Mode(Root.A1, QuarterInt(q))),
                  a12_degrees.map(lambda q: Mode(Root.A12, QuarterInt(q))))
words = st.lists(modes, max_size=6)


def test_bracket_examples():
    assert bracket(x1("-3/4"), x1("-1/4")) == mono(a12=(-4,)).scale(Fraction(-1, 2))
    assert bracket(x1("-1/4"), x1("-1/4")) == Element()
    assert bracket(x12(-1), x1("-1/4")) == Element()


@pytest.mark.parametrize("q", [d for d in range(-41, 42) if d % 2])
def test_bracket_matches_closed_form(q):
    for partner in (-q, 4 - q, -8 - q):
        assert Scalar(bracket_coeff(q, partner)) == closed_form_coefficient(q)
    assert bracket_coeff(q, q) == 0


def test_alpha2_mode_examples():
    assert alpha2_mode("1/4") == (1, x1("1/4"))
    assert alpha2_mode("-1/4") == (-1, x1("-1/4"))
    # -5/4 = 3/4 - 2, so it sits in the 3/4 class
    assert alpha2_mode("-5/4") == (-1, x1("-5/4"))
    assert alpha2_mode("5/4") == (1, x1("5/4"))
    with pytest.raises(ValueError):
        alpha2_mode("1/2")


def test_mode_invariants():
    with pytest.raises(ValueError):
        x1("1/2")
    with pytest.raises(ValueError):
        x12("1/4")
    assert x1("-1/4").charge == 1 and x12(-1).charge == 2
    assert x1("-3/4").weight4 == 3


def test_normal_order_examples():
    assert normal_order([x1("-1/4"), x1("-3/4")]) == mono((-3, -1)) + mono(a12=(-4,)).scale(Fraction(1, 2))
    assert normal_order([x12(-2), x1("-1/4")]) == mono((-1,), (-8,))
    assert normal_order([x1("3/4"), x1("-7/4")]) == mono((-7, 3)) + mono(a12=(-4,)).scale(Fraction(1, 2))


def test_rendering_and_parsing():
    m = parse_monomial("x1(-3/4) x1(-1/4)^2 x12(-1)")
    assert m == NormalMonomial((-3, -1, -1), (-4,))
    assert render_monomial(m) == "x1(-3/4) x1(-1/4)^2 x12(-1)"
    assert render_monomial(IDENTITY) == "1"
    assert m.bidegree == (5, 9)
    with pytest.raises(ValueError):
        parse_monomial("x1(-1/4) x1(-3/4)")
    e = Element.parse("2 x1(-1/4)^2 + 1/2 x12(-1)")
    assert str(e) == "2 x1(-1/4)^2 + 1/2 x12(-1)"


def test_plus_class():
    assert NormalMonomial((-3, 1), ()).is_plus_class()
    assert NormalMonomial((), (0,)).is_plus_class()
    assert not NormalMonomial((-3, -1), (-4,)).is_plus_class()


def test_tau_examples():
    assert tau(mono((-3,)), "forward") == mono((-1,)).scale(-I)
    assert tau(Element.monomial(IDENTITY)) == Element.monomial(IDENTITY)
    assert tau(mono(a12=(0,)), "inverse") == mono(a12=(-4,))
    with pytest.raises(ValueError):
        tau(mono((-1,)), "sideways")


def test_psi_examples():
    assert psi(Element.monomial(IDENTITY)) == mono((-1,))
    assert psi(tau(mono((-1,)))) == normal_order([x1("-1/4"), x1("-1/4")])
    assert psi(mono((-1,)).scale(-I)) == mono((-3, -1))


@given(modes, modes)
def test_antisymmetry(a, b):
    assert bracket(a, b) + bracket(b, a) == Element()


@given(modes, modes, modes)
def test_double_brackets_vanish(a, b, c):
    inner = bracket(a, b)
    for m, _ in inner:
        assert bracket(c, m.modes()[0]) == Element()
        assert bracket(m.modes()[0], c) == Element()


@given(modes, modes)
def test_a12_is_central(a, b):
    if a.root is Root.A12 or b.root is Root.A12:
        assert normal_order([a, b]) == normal_order([b, a])


@given(words)
def test_confluence(word):
    fold = normal_order(word)
    assert normal_order(word, strategy="left") == fold
    assert normal_order(word, strategy="right") == fold


@given(words)
def test_bidegree_additivity(word):
    charge = sum(m.charge for m in word)
    w4 = sum(m.weight4 for m in word)
    assert all(m.bidegree == (charge, w4) for m in normal_order(word).terms)


@given(words)
def test_tau_is_automorphism(word):
    image = Element.monomial(IDENTITY)
    for m in word:
        image = image * tau(Element.from_modes([m]))
    assert tau(normal_order(word)) == image


@given(words)
def test_tau_inverse_undoes_forward(word):
    e = normal_order(word)
    assert tau(tau(e), "inverse") == e
    assert tau(tau(e, "inverse")) == e


@given(words)
def test_psi_tau_identity(word):
    a = normal_order(word)
    assert psi(tau(a)) == a * mono((-1,))


@given(words, words)
def test_product_is_associative_with_normal_ordering(u, v):
    assert normal_order(u) * normal_order(v) == normal_order(u + v)


def test_randomized_laws_bulk():
    """At least 10^4 random cases for each algebra law."""
    rng = random.Random(20240601)

    def rand_mode():
        if rng.random() < 0.7:
            return Mode(Root.A1, QuarterInt(2 * rng.randint(-10, 9) + 1))
        return Mode(Root.A12, QuarterInt(4 * rng.randint(-5, 5)))

    for _ in range(10_000):
        a, b, c = rand_mode(), rand_mode(), rand_mode()
        assert bracket(a, b) + bracket(b, a) == Element()
        for m, _ in bracket(a, b):
            assert bracket(c, m.modes()[0]) == Element()
        if a.root is Root.A12:
            assert normal_order([a, b]) == normal_order([b, a])
        word = [rand_mode() for _ in range(rng.randint(0, 6))]
        fold = normal_order(word)
        assert normal_order(word, strategy="left") == fold == normal_order(word, strategy="right")


@given(st.lists(st.sampled_from([-7, -5, -3, -1, 1, 3]), max_size=5), st.sampled_from([-9, -7, -5, -3, -1, 1, 3]))
def test_left_mul_terms_are_distinct_and_match_exchange(a1, d):
    from a22ps.algebra import left_mul, order_word_exchange
    mono = NormalMonomial(tuple(sorted(a1)), ())
    terms = left_mul(False, d, mono)
    assert len({m for m, _ in terms}) == len(terms)
    word = ((False, d),) + tuple((False, x) for x in mono.a1)
    assert dict(terms) == order_word_exchange(word, "left")
