"""Truncated formal series, characters, recursions, Nahm sums and Euler products."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import Box, DimTable, TruncationError


class GuardViolation(TruncationError):
    """A comparison would read coefficients the truncation cannot certify."""


@dataclass
class QSeries:
    """Power series in q truncated after q^N."""

    N: int
    coeffs: list = field(default_factory=list)

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs[: self.N + 1]]
        self.coeffs = c + [Fraction(0)] * (self.N + 1 - len(c))

    @classmethod
    def one(cls, N: int) -> "QSeries":
        return cls(N, [1])

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n <= self.N else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.N, other.N)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __add__(self, other: "QSeries") -> "QSeries":
        n = min(self.N, other.N)
        return QSeries(n, [a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])])

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = min(self.N, other.N)
        return QSeries(n, [a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])])

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries(self.N, [a * other for a in self.coeffs])
        n = min(self.N, other.N)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return QSeries(n, out)

    def shift(self, e: int) -> "QSeries":
        """Multiply by q^e."""
        return QSeries(self.N, [Fraction(0)] * e + self.coeffs[: self.N + 1 - e])

    def divide_by_one_minus(self, m: int) -> "QSeries":
        """Multiply by 1 / (1 - q^m)."""
        c = list(self.coeffs)
        for n in range(m, self.N + 1):
            c[n] += c[n - m]
        return QSeries(self.N, c)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json(self) -> list:
        return [[e, c.numerator, c.denominator] for e, c in enumerate(self.coeffs) if c]

    def __str__(self):
        terms = []
        for e, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c} q^{e}")
        return " + ".join(terms) if terms else "0"


def pochhammer_q2(n: int, N: int) -> QSeries:
    """(q^2; q^2)_n = prod_{j=0}^{n-1} (1 - q^(2+2j)), truncated at q^N."""
    s = QSeries.one(N)
    for j in range(n):
        factor = QSeries(N, [1] + [0] * (1 + 2 * j) + [-1])
        s = s * factor
    return s


@dataclass
class BiSeries:
    """Series in x and q^(1/4); coefficients keyed by (x exponent, 4 * q exponent)."""

    max_x: int
    max_q4: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {(a, b): Fraction(c) for (a, b), c in self.coeffs.items()
                       if c and 0 <= a <= self.max_x and 0 <= b <= self.max_q4}

    def __getitem__(self, key) -> Fraction:
        return self.coeffs.get(tuple(key), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.max_x, self.max_q4, self.coeffs) == (other.max_x, other.max_q4, other.coeffs)

    def _trunc(self, other: "BiSeries") -> tuple[int, int]:
        return min(self.max_x, other.max_x), min(self.max_q4, other.max_q4)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return BiSeries(*self._trunc(other), out)

    def __neg__(self) -> "BiSeries":
        return BiSeries(self.max_x, self.max_q4, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        mx, mq = self._trunc(other)
        out: dict = {}
        for (a, b), c in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                if a + a2 <= mx and b + b2 <= mq:
                    out[(a + a2, b + b2)] = out.get((a + a2, b + b2), 0) + c * c2
        return BiSeries(mx, mq, out)

    def times_monomial(self, xe: int, q4: int) -> "BiSeries":
        return BiSeries(self.max_x, self.max_q4, {(a + xe, b + q4): c for (a, b), c in self.coeffs.items()})

    def substitute_x_q_half(self) -> "BiSeries":
        """x -> x q^(1/2): the term x^r q^s becomes x^r q^(s + r/2)."""
        return BiSeries(self.max_x, self.max_q4, {(a, b + 2 * a): c for (a, b), c in self.coeffs.items()})

    def specialize(self) -> QSeries:
        """x -> 1 and q -> q^4; exact only up to q^max_q4 when all charges are present."""
        out = [Fraction(0)] * (self.max_q4 + 1)
        for (a, b), c in self.coeffs.items():
            out[b] += c
        return QSeries(self.max_q4, out)

    def to_json(self) -> list:
        return [[a, b, c.numerator, c.denominator] for (a, b), c in sorted(self.coeffs.items())]


def character(table: DimTable) -> BiSeries:
    return BiSeries(table.box.max_charge, table.box.max_w4, dict(table.entries))


def monomial_count_series(box: Box) -> BiSeries:
    """prod over negative x1 modes of 1/(1 - x q^(-m)) times prod over negative x12 modes of 1/(1 - x^2 q^(-n))."""
    s = BiSeries(box.max_charge, box.max_w4, {(0, 0): 1})
    factors = [(1, q4) for q4 in range(1, box.max_w4 + 1, 2)] + [(2, q4) for q4 in range(4, box.max_w4 + 1, 4)]
    for xe, q4 in factors:
        # multiply by the geometric series in x^xe q^q4, in place
        c = dict(s.coeffs)
        for a in range(xe, box.max_charge + 1):
            for b in range(q4, box.max_w4 + 1):
                prev = c.get((a - xe, b - q4))
                if prev:
                    c[(a, b)] = c.get((a, b), 0) + prev
        s = BiSeries(box.max_charge, box.max_w4, c)
    return s


@dataclass
class SeriesReport:
    check: str
    k: int
    status: str
    mismatches: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "conjecture-pass")

    def to_dict(self) -> dict:
        out = {"check": self.check, "k": self.k, "status": self.status, "mismatches": self.mismatches}
        out.update(self.extra)
        return out


def spec_guard(k: int, box: Box) -> tuple[int, int]:
    """Conservative guard: x exponent <= maxcharge - k and 4 q-exponent <= 4 maxweight - k - 2 maxcharge."""
    return box.max_charge - k, box.max_w4 - k - 2 * box.max_charge


def verify_recursions(k: int, t0: DimTable, t1: DimTable, tk: DimTable) -> SeriesReport:
    """Check both character recursions coefficientwise.

    Entries of the tables are exact, and every coefficient of the right-hand
    sides at a bidegree of the box reads only entries of the box, so the whole
    box is checked.  The conservative guard region is reported alongside.
    """
    if not (t0.box == t1.box == tk.box):
        raise ValueError("tables must share their box")
    c0, c1, ck = character(t0), character(t1), character(tk)
    rhs1 = c1 + c0.substitute_x_q_half().times_monomial(k, k)
    rhs2 = c0.substitute_x_q_half()
    gx, gq = spec_guard(k, t0.box)
    mismatches = []
    in_guard = 0
    for r, w4 in t0.box.bidegrees():
        guarded = r <= gx and w4 <= gq
        in_guard += guarded
        if c0[(r, w4)] != rhs1[(r, w4)]:
            mismatches.append({"identity": "W0 = W1 + x^k q^(k/4) W0(xq^(1/2))", "bidegree": [r, w4],
                               "lhs": int(c0[(r, w4)]), "rhs": int(rhs1[(r, w4)]), "in_guard": guarded})
        if ck[(r, w4)] != rhs2[(r, w4)]:
            mismatches.append({"identity": "Wk = W0(xq^(1/2))", "bidegree": [r, w4],
                               "lhs": int(ck[(r, w4)]), "rhs": int(rhs2[(r, w4)]), "in_guard": guarded})
    return SeriesReport("recursions", k, "fail" if mismatches else "pass", mismatches,
                        {"box": t0.box.as_list(), "checked": len(t0.box.bidegrees()),
                         "guard": [gx, gq], "guard_coefficients": in_guard})


def tadpole_cartan(k: int) -> list[list[int]]:
    t = [[0] * k for _ in range(k)]
    for s in range(k):
        t[s][s] = 2
        if s + 1 < k:
            t[s][s + 1] = t[s + 1][s] = -1
    t[k - 1][k - 1] = 1
    return t


def tadpole_inverse(k: int) -> list[list[int]]:
    if k < 1:
        raise ValueError("rank must be positive")
    b = [[min(s, t) for t in range(1, k + 1)] for s in range(1, k + 1)]
    t = tadpole_cartan(k)
    prod = [[sum(b[s][u] * t[u][v] for u in range(k)) for v in range(k)] for s in range(k)]
    if prod != [[int(s == v) for v in range(k)] for s in range(k)]:
        raise ArithmeticError("min(s,t) is not inverse to the tadpole matrix")
    return b


def nahm_sum(k: int, N: int) -> QSeries:
    """sum over r in N^k of q^(r^T B r) / prod (q^2; q^2)_{r_s}, B = min(s, t), truncated at q^N."""
    b = tadpole_inverse(k)
    total = QSeries(N, [])

    def form(r):
        return sum(b[s][t] * r[s] * r[t] for s in range(k) for t in range(k))

    def rec(prefix):
        # the form is monotone in each coordinate, so prune on the partial vector
        if len(prefix) == k:
            yield tuple(prefix)
            return
        v = 0
        while True:
            cand = prefix + [v]
            if form(cand + [0] * (k - len(cand))) > N:
                return
            yield from rec(cand)
            v += 1

    for r in rec([]):
        e = form(r)
        term = QSeries(N, [0] * e + [1])
        for rs in r:
            for j in range(1, rs + 1):
                term = term.divide_by_one_minus(2 * j)
        total = total + term
    return total


def gga_allowed(n: int, m: int) -> bool:
    mod = 4 * m + 4
    return n % 4 != 2 and n % mod not in (0, (2 * m + 1) % mod, (-(2 * m + 1)) % mod)


def gga_product(m: int, N: int) -> QSeries:
    if m < 1:
        raise ValueError("m must be positive")
    s = QSeries.one(N)
    for n in range(1, N + 1):
        if gga_allowed(n, m):
            s = s.divide_by_one_minus(n)
    return s


def count_partitions(N: int, allowed) -> list[int]:
    """Partition counts by direct enumeration of multisets of allowed parts (independent of the series code)."""
    parts = [n for n in range(1, N + 1) if allowed(n)]
    counts = [0] * (N + 1)

    def rec(total, idx):
        counts[total] += 1
        for j in range(idx, len(parts)):
            if total + parts[j] > N:
                break
            rec(total + parts[j], j)

    rec(0, 0)
    return counts


def conjecture_charge_bound(k: int, N: int) -> int:
    return int((N * k) ** 0.5 + 1e-9) + k


def check_conjecture(k: int, table: DimTable, N: int) -> SeriesReport:
    """Compare chi'(1, q^4) of W_{k,0} with the Nahm sum and, for even k, the product side."""
    need_charge = conjecture_charge_bound(k, N)
    if N > table.box.max_w4 or need_charge > table.box.max_charge:
        raise GuardViolation(f"q-order {N} needs 4w <= {N} and charge <= {need_charge}; "
                             f"table box is {table.box}")
    chi = character(table).specialize()
    chi = QSeries(N, chi.coeffs[: N + 1])
    sides = {"character": chi, "nahm": nahm_sum(k, N)}
    if k % 2 == 0:
        sides["product"] = gga_product(k // 2, N)
    mismatches = []
    for n in range(N + 1):
        vals = {name: s[n] for name, s in sides.items()}
        if len(set(vals.values())) > 1:
            mismatches.append({"q": n, **{name: int(v) for name, v in vals.items()}})
    excess = sorted({c for (c, w4), d in table.entries.items() if d and w4 <= N and c > need_charge})
    return SeriesReport("conjecture-nahm", k, "conjecture-fail" if mismatches else "conjecture-pass", mismatches,
                        {"N": N, "sides": {name: s.to_json() for name, s in sides.items()},
                         "charge_bound": need_charge, "charges_beyond_bound": excess})


def series_json(obj) -> str:
    return json.dumps(obj.to_json(), separators=(",", ":"))
