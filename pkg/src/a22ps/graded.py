"""Bigraded pieces of the enveloping algebra and graded submodules of them.

A *bidegree* is ``(charge, w4)`` where ``w4`` is four times the weight; the
weight of a monomial is minus the sum of its degrees, so negative modes have
positive weight.

Let M = U / U n+ be the quotient of the enveloping algebra by the left ideal
of nonnegative modes.  Its basis is the set of *negative* normal monomials,
and every left ideal containing U n+ is the preimage of a submodule of M.
:class:`GradedSubmodule` builds such submodules bidegree by bidegree.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .algebra import NormalMonomial, left_mul_vec, monomial_sort_key
from .exact import QuarterInt
from .linalg import EchelonBasis


class TruncationError(ValueError):
    """A bidegree or degree lies outside the configured truncation box."""


@dataclass(frozen=True, order=True)
class Bidegree:
    charge: int
    w4: int

    @property
    def weight(self) -> QuarterInt:
        return QuarterInt(self.w4)

    def __iter__(self):
        return iter((self.charge, self.w4))

    def __str__(self):
        return f"({self.charge}, {self.weight})"


@dataclass(frozen=True)
class Box:
    """Truncation box: charge <= max_charge and 4*weight <= max_w4."""

    max_charge: int
    max_w4: int

    def __post_init__(self):
        if self.max_charge < 0 or self.max_w4 < 0:
            raise ValueError("box bounds must be nonnegative")

    def __contains__(self, b) -> bool:
        c, w4 = b
        return 0 <= c <= self.max_charge and 0 <= w4 <= self.max_w4

    def bidegrees(self) -> list[tuple[int, int]]:
        """All bidegrees of the box, ordered by weight then charge."""
        return [(c, w4) for w4 in range(self.max_w4 + 1) for c in range(self.max_charge + 1)]

    def require(self, b) -> None:
        if b not in self:
            raise TruncationError(f"bidegree {tuple(b)} outside box {self}")

    def as_list(self) -> list[int]:
        return [self.max_charge, self.max_w4]

    def __str__(self):
        return f"(charge<={self.max_charge}, 4w<={self.max_w4})"


def default_box(k: int) -> Box:
    return Box(2 * (k + 2), 20)


# ---------------------------------------------------------------------------
# monomial enumeration

def _partitions(total: int, parts: int, allowed: Callable[[int], bool], largest: int) -> Iterator[tuple]:
    """Nonincreasing tuples of ``parts`` allowed positive ints, each <= largest, summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for first in range(min(largest, total - (parts - 1)), 0, -1):
        if allowed(first):
            for rest in _partitions(total - first, parts - 1, allowed, first):
                yield (first,) + rest


def _odd(n: int) -> bool:
    return n % 2 == 1


def _mult4(n: int) -> bool:
    return n % 4 == 0


def negative_monomials(charge: int, w4: int) -> list[NormalMonomial]:
    """All negative normal monomials of a bidegree in deterministic order."""
    return list(_negative_monomials_cached(charge, w4))


_NEG_CACHE: dict = {}


def _negative_monomials_cached(charge: int, w4: int) -> tuple:
    key = (charge, w4)
    hit = _NEG_CACHE.get(key)
    if hit is not None:
        return hit
    out = []
    if charge >= 0 and w4 >= 0:
        for n12 in range(charge // 2 + 1):
            n1 = charge - 2 * n12
            for s12 in range(4 * n12, w4 + 1, 4):
                s1 = w4 - s12
                for p12 in _partitions(s12, n12, _mult4, s12):
                    for p1 in _partitions(s1, n1, _odd, s1):
                        out.append(NormalMonomial(tuple(-d for d in p1), tuple(-d for d in p12)))
    out.sort(key=monomial_sort_key)
    result = tuple(out)
    _NEG_CACHE[key] = result
    return result


def _bounded_monomials(charge: int, w4: int, min_q: int) -> list[NormalMonomial]:
    """Monomials of a bidegree with every degree >= min_q (quarter units)."""
    out = []
    target = -w4
    for n12 in range(charge // 2 + 1):
        n1 = charge - 2 * n12
        a12_vals = [d for d in range(min_q, -target + 4 * n12 + 1) if d % 4 == 0]
        a1_vals = [d for d in range(min_q, -target + abs(min_q) * charge + 2) if d % 2 == 1]

        def combos(vals, n, start, remaining):
            if n == 0:
                yield ()
                return
            for j in range(start, len(vals)):
                v = vals[j]
                if v * n > remaining:
                    break
                for rest in combos(vals, n - 1, j, remaining - v):
                    yield (v,) + rest

        for p12 in combos(a12_vals, n12, 0, target - n1 * min_q):
            rest = target - sum(p12)
            for p1 in combos(a1_vals, n1, 0, rest):
                if sum(p1) == rest:
                    out.append(NormalMonomial(p1, p12))
    out.sort(key=monomial_sort_key)
    return out


def enumerate_monomials(b, negative_only: bool = True, min_degree: QuarterInt | None = None) -> list[NormalMonomial]:
    """Canonical monomials of bidegree ``b = (charge, w4)``.

    With ``negative_only`` every degree is < 0.  Otherwise the set is infinite
    for charge >= 2, so a lower degree bound ``min_degree`` is required.
    """
    charge, w4 = b
    if negative_only:
        return negative_monomials(charge, w4)
    if min_degree is None:
        raise ValueError("an unrestricted bidegree piece is infinite; pass min_degree")
    return _bounded_monomials(charge, w4, QuarterInt.of(min_degree).numerator)


# ---------------------------------------------------------------------------
# dimension tables

@dataclass
class DimTable:
    descriptor: dict
    box: Box
    entries: dict = field(default_factory=dict)

    def __getitem__(self, b) -> int:
        """Dimension at ``(charge, w4)``; zero outside the first quadrant."""
        c, w4 = b
        if c < 0 or w4 < 0:
            return 0
        if (c, w4) not in self.box:
            raise TruncationError(f"bidegree {(c, w4)} outside table box {self.box}")
        return self.entries[(c, w4)]

    def get(self, b, default=0) -> int:
        c, w4 = b
        if c < 0 or w4 < 0:
            return 0
        return self.entries.get((c, w4), default)

    def rows(self) -> list[list[int]]:
        return [[c, w4, self.entries[(c, w4)]] for c, w4 in sorted(self.entries)]

    def to_json(self) -> str:
        payload = dict(self.descriptor)
        payload["box"] = self.box.as_list()
        payload["entries"] = self.rows()
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["charge", "weight_x4", "dim"])
        writer.writerows(self.rows())
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [" ".join(f"{k}={v}" for k, v in sorted(self.descriptor.items())),
                 "charge\\4w " + " ".join(f"{w:>3}" for w in range(self.box.max_w4 + 1))]
        for c in range(self.box.max_charge + 1):
            lines.append(f"{c:>9} " + " ".join(f"{self.entries[(c, w)]:>3}" for w in range(self.box.max_w4 + 1)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DimTable":
        payload = json.loads(text)
        box = Box(*payload.pop("box"))
        entries = {(c, w4): d for c, w4, d in payload.pop("entries")}
        return cls(payload, box, entries)

    def restrict(self, box: Box) -> "DimTable":
        return DimTable(dict(self.descriptor), box,
                        {b: d for b, d in self.entries.items() if b in box})


# ---------------------------------------------------------------------------
# graded submodules of M

def negative_modes_into(b) -> Iterator[tuple[bool, int, tuple[int, int]]]:
    """Negative modes ``(is_a12, q)`` whose left action lands in ``b``, with the source bidegree."""
    c, w4 = b
    if c >= 1:
        for q in range(-1, -w4 - 1, -2):
            yield False, q, (c - 1, w4 + q)
    if c >= 2:
        for q in range(-4, -w4 - 1, -4):
            yield True, q, (c - 2, w4 + q)


def drop_plus(vec: dict) -> dict:
    return {m: c for m, c in vec.items() if not m.is_plus_class()}


class GradedSubmodule:
    """The U(n-)-submodule of M generated by given bihomogeneous vectors, inside a box.

    ``N_b = span(seeds_b) + sum over negative modes mu of mu * N_{b - deg mu}``;
    multiplying by a negative mode raises the weight, so bidegrees are filled
    in order of increasing weight.
    """

    def __init__(self, seeds: dict, box: Box):
        self.box = box
        self.seeds = {b: list(v) for b, v in seeds.items() if b in box}
        self._bases: dict = {}

    def basis(self, b) -> EchelonBasis:
        b = tuple(b)
        hit = self._bases.get(b)
        if hit is not None:
            return hit
        self.box.require(b)
        # fill lower weights first to keep recursion shallow
        for w4 in range(0, b[1]):
            for c in range(0, b[0] + 1):
                if (c, w4) not in self._bases:
                    self._build((c, w4))
        for c in range(0, b[0] + 1):
            if (c, b[1]) not in self._bases:
                self._build((c, b[1]))
        return self._bases[b]

    def _build(self, b) -> None:
        basis = EchelonBasis(order=monomial_sort_key)
        for vec in self.seeds.get(b, ()):
            basis.add(vec)
        for is_a12, q, src in negative_modes_into(b):
            if src[0] < 0 or src[1] < 0:
                continue
            src_basis = self._bases.get(src)
            if src_basis is None:
                src_basis = self.basis(src)
            for row in src_basis.rows.values():
                basis.add(left_mul_vec(is_a12, q, row))
        self._bases[b] = basis

    def rank(self, b) -> int:
        return self.basis(b).rank

    def quotient_dim(self, b) -> int:
        c, w4 = b
        return len(negative_monomials(c, w4)) - self.rank(b)

    def quotient_basis(self, b) -> list[NormalMonomial]:
        """Non-pivot negative monomials, in enumeration order."""
        pivots = set(self.basis(b).rows)
        return [m for m in negative_monomials(*b) if m not in pivots]

    def contains(self, b, vec: dict) -> bool:
        return self.basis(b).contains(vec)

    def dims(self) -> dict:
        return {b: self.quotient_dim(b) for b in self.box.bidegrees()}
