from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from a22ps.exact import Scalar
from a22ps.linalg import EchelonBasis, rank_integer, rank_matrix

small = st.integers(-4, 4)
matrices = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=0, max_size=7))


@given(matrices)
def test_bareiss_matches_sympy(rows):
    expected = sympy.Matrix(rows).rank() if rows else 0
    assert rank_integer(rows) == expected


@given(matrices)
def test_echelon_matches_bareiss(rows):
    eb = EchelonBasis()
    for r in rows:
        eb.add({j: Fraction(x) for j, x in enumerate(r) if x})
    assert eb.rank == rank_integer(rows)


@given(matrices, st.randoms())
def test_pivots_independent_of_insertion_order(rows, rnd):
    vecs = [{j: Fraction(x) for j, x in enumerate(r) if x} for r in rows]
    a, b = EchelonBasis(), EchelonBasis()
    a.extend(vecs)
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    b.extend(shuffled)
    assert sorted(a.pivots) == sorted(b.pivots)
    for v in vecs:
        assert a.contains(v) and b.contains(v)


@given(matrices, matrices)
def test_gaussian_rank_matches_sympy(re_rows, im_rows):
    n = min(len(re_rows), len(im_rows))
    if not n:
        return
    width = min(len(re_rows[0]), len(im_rows[0]))
    rows = [[Scalar(re_rows[r][c], im_rows[r][c]) for c in range(width)] for r in range(n)]
    expected = sympy.Matrix([[re_rows[r][c] + sympy.I * im_rows[r][c] for c in range(width)]
                             for r in range(n)]).rank(simplify=True)
    assert rank_matrix(rows) == expected


def test_rank_examples():
    assert rank_matrix([]) == 0
    assert rank_matrix([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert rank_matrix([[Scalar(1, 0), Scalar(0, 1)], [Scalar(0, 1), Scalar(-1, 0)]]) == 1
