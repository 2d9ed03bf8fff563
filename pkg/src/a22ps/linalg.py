"""Exact linear algebra: fraction-free rank and incremental echelon bases.

Two independent routes to a rank exist on purpose: :func:`rank_matrix` runs
Bareiss elimination over the integers, :class:`EchelonBasis` does sparse
Gaussian elimination over Fractions.  Tests compare the two.
"""

from __future__ import annotations

import math
from bisect import insort
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .exact import Scalar


def _integer_row(row: Sequence) -> list[int]:
    fracs = [Fraction(x) for x in row]
    den = 1
    for f in fracs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return [int(f * den) for f in fracs]


def rank_integer(matrix: list[list[int]]) -> int:
    """Rank of an integer matrix by Bareiss fraction-free elimination.

    The pivot in each column is the entry of smallest bit length, which keeps
    the intermediate minors small.  All divisions are exact.
    """
    m = [list(r) for r in matrix if any(r)]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        if rank == nrows:
            break
        best, best_bits = -1, None
        for i in range(rank, nrows):
            v = m[i][col]
            if v:
                bits = abs(v).bit_length()
                if best_bits is None or bits < best_bits:
                    best, best_bits = i, bits
        if best < 0:
            continue
        m[rank], m[best] = m[best], m[rank]
        pivot_row = m[rank]
        p = pivot_row[col]
        for i in range(rank + 1, nrows):
            row = m[i]
            f = row[col]
            for j in range(col + 1, ncols):
                num = p * row[j] - f * pivot_row[j]
                q, r = divmod(num, prev)
                if r:
                    raise ArithmeticError("Bareiss division was not exact")
                row[j] = q
            row[col] = 0
        prev = p
        rank += 1
    return rank


def rank_matrix(rows: Sequence[Sequence]) -> int:
    """Exact rank of a matrix of ints, Fractions or Scalars (Gaussian rationals).

    Gaussian entries are handled through the real form [[A, -B], [B, A]],
    whose rank is twice the rank over Q(i).
    """
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if any(isinstance(x, Scalar) and not x.is_real() for r in rows for x in r):
        re = [[Scalar.of(x).re for x in r] for r in rows]
        im = [[Scalar.of(x).im for x in r] for r in rows]
        top = [a + [-b for b in bb] for a, bb in zip(re, im)]
        bottom = [b + a for a, b in zip(re, im)]
        return rank_integer([_integer_row(r) for r in top + bottom]) // 2
    real = [[Scalar.of(x).re if isinstance(x, Scalar) else x for x in r] for r in rows]
    return rank_integer([_integer_row(r) for r in real])


def dense_rows(vectors: Iterable[dict], columns: Sequence[Hashable]) -> list[list]:
    index = {c: j for j, c in enumerate(columns)}
    out = []
    for vec in vectors:
        row = [0] * len(columns)
        for key, c in vec.items():
            row[index[key]] = c
        out.append(row)
    return out


class EchelonBasis:
    """Sparse row-echelon basis over Q, grown one vector at a time.

    Vectors are dicts ``key -> Fraction``.  The pivot of a row is its smallest
    key under ``order``; rows are scaled so the pivot entry is 1.  Because
    pivots are leading entries, the set of pivot keys depends only on the
    spanned subspace, not on insertion order.
    """

    def __init__(self, order: Callable | None = None):
        self.order = order or (lambda k: k)
        self.rows: dict = {}
        self._pivots: list = []

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return [p for _, p in self._pivots]

    def reduce(self, vec: dict) -> dict:
        """Return a copy of ``vec`` with every pivot coordinate eliminated."""
        v = {k: c for k, c in vec.items() if c}
        rows = self.rows
        for _, p in self._pivots:
            c = v.get(p)
            if c:
                for key, r in rows[p].items():
                    x = v.get(key, 0) - c * r
                    if x:
                        v[key] = x
                    else:
                        del v[key]
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True when it was independent of the current rows."""
        v = self.reduce(vec)
        if not v:
            return False
        order = self.order
        pivot = min(v, key=order)
        lead = v[pivot]
        if lead != 1:
            v = {k: c / lead for k, c in v.items()}
        self.rows[pivot] = v
        insort(self._pivots, (order(pivot), pivot))
        return True

    def extend(self, vectors: Iterable[dict]) -> int:
        return sum(self.add(v) for v in vectors)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def coordinates(self, vec: dict, basis_index: dict) -> dict:
        """Reduce ``vec`` and express the remainder on non-pivot keys via ``basis_index``."""
        return {basis_index[k]: c for k, c in self.reduce(vec).items()}
