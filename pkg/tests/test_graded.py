import pytest
from hypothesis import given, strategies as st

from a22ps.algebra import IDENTITY, NormalMonomial, parse_monomial
from a22ps.graded import Box, DimTable, TruncationError, default_box, enumerate_monomials, negative_monomials
from a22ps.qseries import monomial_count_series


def test_enumeration_examples():
    assert enumerate_monomials((2, 4)) == [parse_monomial("x1(-3/4) x1(-1/4)"), parse_monomial("x12(-1)")]
    assert enumerate_monomials((2, 2)) == [parse_monomial("x1(-1/4)^2")]
    assert enumerate_monomials((0, 0)) == [IDENTITY]
    assert enumerate_monomials((1, 2)) == []


def test_unbounded_enumeration_needs_a_bound():
    with pytest.raises(ValueError):
        enumerate_monomials((2, 4), negative_only=False)


@given(st.integers(0, 5), st.integers(0, 14), st.integers(-12, -1))
def test_bounded_enumeration_restricts_to_negative(c, w4, lo):
    full = enumerate_monomials((c, w4), negative_only=False, min_degree=type(lo) and __import__("a22ps").QuarterInt(lo))
    neg = [m for m in full if not m.is_plus_class()]
    expected = [m for m in negative_monomials(c, w4) if all(d >= lo for d in m.a1 + m.a12)]
    assert neg == expected
    assert len(set(full)) == len(full)
    assert all(m.bidegree == (c, w4) for m in full)
    assert all(min(m.a1 + m.a12, default=0) >= lo for m in full)


@given(st.integers(0, 6), st.integers(0, 20))
def test_enumeration_is_sorted_unique_and_consistent(c, w4):
    ms = negative_monomials(c, w4)
    assert len(set(ms)) == len(ms)
    for m in ms:
        assert m.bidegree == (c, w4)
        assert list(m.a1) == sorted(m.a1) and list(m.a12) == sorted(m.a12)
        assert not m.is_plus_class()


def test_monomial_counts_match_generating_function():
    box = Box(6, 20)
    series = monomial_count_series(box)
    for b in box.bidegrees():
        assert series[b] == len(negative_monomials(*b))


def test_box_and_table():
    box = Box(2, 3)
    assert (2, 3) in box and (3, 0) not in box and (0, -1) not in box
    with pytest.raises(TruncationError):
        box.require((3, 0))
    assert default_box(2) == Box(8, 20)
    t = DimTable({"k": 1}, box, {b: 1 for b in box.bidegrees()})
    assert DimTable.from_json(t.to_json()) == t
    assert t[(-1, 0)] == 0
    assert t.to_csv().splitlines()[0] == "charge,weight_x4,dim"
    with pytest.raises(TruncationError):
        t[(5, 0)]
