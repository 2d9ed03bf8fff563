"""The nilpotent twisted algebra and Poincaré-Birkhoff-Witt normal ordering.

The algebra is spanned by modes ``x1(m)`` with ``m`` in 1/4 + (1/2)Z and
central modes ``x12(n)`` with ``n`` integral.  The only nonzero brackets are

    [x1(m), x1(n)] = c(m) x12(m + n)     when m + n is integral,

with ``c(m) = -1/2`` for ``m = 1/4 (mod 1)`` and ``c(m) = +1/2`` for
``m = 3/4 (mod 1)``.  Modes of the second simple root are not separate
generators; :func:`alpha2_mode` expresses them through ``x1``.

Internally every degree is an ``int`` counting quarters, so ``x1(-3/4)`` has
degree ``-3`` and ``x12(-1)`` has degree ``-4``.
"""

from __future__ import annotations

import enum
import re
from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .exact import ONE, QuarterInt, Scalar, format_fraction, i_power

HALF = Fraction(1, 2)


class Root(enum.Enum):
    A1 = "x1"
    A12 = "x12"

    @property
    def charge(self) -> int:
        return 1 if self is Root.A1 else 2


@dataclass(frozen=True)
class Mode:
    """A generator ``x_root(degree)``; the degree residue is validated."""

    root: Root
    degree: QuarterInt

    def __post_init__(self):
        object.__setattr__(self, "degree", QuarterInt.of(self.degree))
        q = self.degree.numerator
        if self.root is Root.A1 and q % 2 != 1:
            raise ValueError(f"x1 modes need degree in 1/4 + (1/2)Z, got {self.degree}")
        if self.root is Root.A12 and q % 4 != 0:
            raise ValueError(f"x12 modes need an integer degree, got {self.degree}")

    @property
    def q(self) -> int:
        return self.degree.numerator

    @property
    def charge(self) -> int:
        return self.root.charge

    @property
    def weight4(self) -> int:
        return -self.degree.numerator

    def __str__(self):
        return f"{self.root.value}({self.degree})"


def x1(degree) -> Mode:
    return Mode(Root.A1, QuarterInt.of(degree))


def x12(degree) -> Mode:
    return Mode(Root.A12, QuarterInt.of(degree))


class NormalMonomial(NamedTuple):
    """Canonical PBW word: ``x1`` block then ``x12`` block, each ascending.

    Degrees are stored in quarter units.  ``NormalMonomial((), ())`` is the
    identity.
    """

    a1: tuple = ()
    a12: tuple = ()

    @classmethod
    def make(cls, a1: Iterable[int] = (), a12: Iterable[int] = ()) -> "NormalMonomial":
        a1, a12 = tuple(sorted(a1)), tuple(sorted(a12))
        if any(d % 2 != 1 for d in a1) or any(d % 4 for d in a12):
            raise ValueError("degree outside the residue class of its root")
        return cls(a1, a12)

    @classmethod
    def from_modes(cls, modes: Iterable[Mode]) -> "NormalMonomial":
        modes = list(modes)
        return cls.make([m.q for m in modes if m.root is Root.A1],
                        [m.q for m in modes if m.root is Root.A12])

    @property
    def charge(self) -> int:
        return len(self.a1) + 2 * len(self.a12)

    @property
    def weight4(self) -> int:
        return -(sum(self.a1) + sum(self.a12))

    @property
    def weight(self) -> QuarterInt:
        return QuarterInt(self.weight4)

    @property
    def bidegree(self) -> tuple[int, int]:
        """(charge, 4 * weight)."""
        return self.charge, self.weight4

    def is_plus_class(self) -> bool:
        """True when some mode has nonnegative degree (the word lies in U n+)."""
        return bool(self.a1 and self.a1[-1] >= 0) or bool(self.a12 and self.a12[-1] >= 0)

    def modes(self) -> list[Mode]:
        return ([Mode(Root.A1, QuarterInt(d)) for d in self.a1]
                + [Mode(Root.A12, QuarterInt(d)) for d in self.a12])

    def word(self) -> tuple:
        """Internal word: tuple of ``(is_a12, quarter_degree)`` letters."""
        return tuple((False, d) for d in self.a1) + tuple((True, d) for d in self.a12)

    def __str__(self):
        return render_monomial(self)


IDENTITY = NormalMonomial((), ())


def _render_block(name: str, degrees: tuple) -> list[str]:
    out, j = [], 0
    while j < len(degrees):
        n = 1
        while j + n < len(degrees) and degrees[j + n] == degrees[j]:
            n += 1
        token = f"{name}({format_fraction(Fraction(degrees[j], 4))})"
        out.append(token if n == 1 else f"{token}^{n}")
        j += n
    return out


def render_monomial(m: NormalMonomial) -> str:
    """Canonical text, e.g. ``x1(-3/4) x1(-1/4)^2 x12(-1)``; identity is ``1``."""
    tokens = _render_block("x1", m.a1) + _render_block("x12", m.a12)
    return " ".join(tokens) if tokens else "1"


_TOKEN = re.compile(r"(x12|x1)\(\s*([-+]?\d+(?:/\d+)?)\s*\)(?:\^(\d+))?")


def parse_modes(text: str) -> list[Mode]:
    """Parse a word like ``x1(-1/4) x12(-1)^2`` into a list of modes (order kept)."""
    text = text.replace("−", "-").strip()
    if text in ("", "1"):
        return []
    modes, pos = [], 0
    for match in _TOKEN.finditer(text):
        if text[pos:match.start()].strip():
            raise ValueError(f"cannot parse {text!r}")
        root = Root.A12 if match.group(1) == "x12" else Root.A1
        mode = Mode(root, QuarterInt.of(match.group(2)))
        modes.extend([mode] * int(match.group(3) or 1))
        pos = match.end()
    if text[pos:].strip():
        raise ValueError(f"cannot parse {text!r}")
    return modes


def parse_monomial(text: str) -> NormalMonomial:
    """Parse canonical text; the word must already be in normal order."""
    modes = parse_modes(text)
    mono = NormalMonomial.from_modes(modes)
    if mono.modes() != modes:
        raise ValueError(f"{text!r} is not in normal order")
    return mono


# ---------------------------------------------------------------------------
# brackets

def bracket_coeff(a: int, b: int) -> Fraction:
    """Coefficient c with [x1(a/4), x1(b/4)] = c x12((a+b)/4); zero if a+b is not a multiple of 4."""
    if (a + b) % 4:
        return Fraction(0)
    return -HALF if a % 4 == 1 else HALF


def bracket(m1: Mode, m2: Mode) -> "Element":
    if m1.root is Root.A1 and m2.root is Root.A1:
        c = bracket_coeff(m1.q, m2.q)
        if c:
            return Element({NormalMonomial((), (m1.q + m2.q,)): Scalar(c)})
    return Element()


def alpha2_mode(m) -> tuple[int, Mode]:
    """Express the second-root mode of degree ``m`` as ``sign * x1(m)``."""
    q = QuarterInt.of(m).numerator
    if q % 4 == 1:
        return 1, Mode(Root.A1, QuarterInt(q))
    if q % 4 == 3:
        return -1, Mode(Root.A1, QuarterInt(q))
    raise ValueError(f"second-root modes need degree in 1/4 + (1/2)Z, got {m}")


# ---------------------------------------------------------------------------
# normal ordering kernels (real coefficients, quarter-unit degrees)

@lru_cache(maxsize=None)
def left_mul(is_a12: bool, d: int, mono: NormalMonomial) -> tuple:
    """Normal form of ``x(d) * mono`` as a tuple of ``(monomial, Fraction)``.

    An ``x1`` letter travels right past every smaller ``x1`` letter; each
    passage leaves a central bracket term.
    """
    if is_a12:
        a12 = list(mono.a12)
        insort(a12, d)
        return ((NormalMonomial(mono.a1, tuple(a12)), Fraction(1)),)
    a1 = mono.a1
    pos = bisect_left(a1, d)
    out = {NormalMonomial(a1[:pos] + (d,) + a1[pos:], mono.a12): Fraction(1)}
    for j in range(pos):
        c = bracket_coeff(d, a1[j])
        if c:
            a12 = list(mono.a12)
            insort(a12, d + a1[j])
            # repeated letters give the same bracket term more than once
            key = NormalMonomial(a1[:j] + a1[j + 1:], tuple(a12))
            out[key] = out.get(key, 0) + c
    return tuple((m, c) for m, c in out.items() if c)


def left_mul_vec(is_a12: bool, d: int, vec: dict) -> dict:
    out: dict = {}
    for mono, c in vec.items():
        for m2, c2 in left_mul(is_a12, d, mono):
            v = out.get(m2, 0) + c * c2
            if v:
                out[m2] = v
            else:
                out.pop(m2, None)
    return out


def order_word_fold(word: tuple) -> dict:
    """Normal-order an internal word by multiplying letters onto 1 from the right."""
    vec = {IDENTITY: Fraction(1)}
    for is_a12, d in reversed(word):
        vec = left_mul_vec(is_a12, d, vec)
    return vec


def order_word_exchange(word: tuple, strategy: str = "left") -> dict:
    """Normal-order by adjacent exchanges; ``strategy`` picks the leftmost or rightmost inversion.

    Independent of :func:`left_mul`; used to check confluence.
    """
    a12 = tuple(sorted(d for is12, d in word if is12))
    a1 = tuple(d for is12, d in word if not is12)
    out: dict = {}
    for (s1, extra), c in _exchange(a1, strategy).items():
        mono = NormalMonomial(s1, tuple(sorted(a12 + extra)))
        out[mono] = out.get(mono, 0) + c
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _exchange_cached(a1: tuple, strategy: str) -> tuple:
    return tuple(_exchange_impl(a1, strategy).items())


def _exchange(a1: tuple, strategy: str) -> dict:
    return dict(_exchange_cached(a1, strategy))


def _exchange_impl(a1: tuple, strategy: str) -> dict:
    inversions = [j for j in range(len(a1) - 1) if a1[j] > a1[j + 1]]
    if not inversions:
        return {(a1, ()): Fraction(1)}
    j = inversions[0] if strategy == "left" else inversions[-1]
    a, b = a1[j], a1[j + 1]
    result = dict(_exchange(a1[:j] + (b, a) + a1[j + 2:], strategy))
    c = bracket_coeff(a, b)
    if c:
        for (s1, extra), c2 in _exchange(a1[:j] + a1[j + 2:], strategy).items():
            key = (s1, tuple(sorted(extra + (a + b,))))
            result[key] = result.get(key, 0) + c * c2
    return {key: v for key, v in result.items() if v}


def _internal_word(word: Iterable[Mode]) -> tuple:
    return tuple((m.root is Root.A12, m.q) for m in word)


# ---------------------------------------------------------------------------
# elements of the enveloping algebra

class Element:
    """Finite linear combination of normal monomials with Q(i) coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict = {}
        for mono, c in (terms or {}).items():
            c = Scalar.of(c)
            if c:
                self.terms[mono] = c

    @classmethod
    def monomial(cls, mono: NormalMonomial, coeff=1) -> "Element":
        return cls({mono: Scalar.of(coeff)})

    @classmethod
    def from_modes(cls, modes: Iterable[Mode]) -> "Element":
        return normal_order(list(modes))

    @classmethod
    def parse(cls, text: str) -> "Element":
        """Parse ``"x1(-3/4) x1(-1/4) + 1/2 x12(-1)"``-style sums of words."""
        elem = cls()
        text = text.replace("−", "-").replace(" - ", " + -")
        for chunk in text.split(" + "):
            chunk = chunk.strip()
            m = re.match(r"^([-+]?\d+(?:/\d+)?)?\s*\*?\s*(.*)$", chunk)
            coeff_txt, word_txt = m.group(1), m.group(2)
            if coeff_txt is None and word_txt.startswith("-"):
                coeff_txt, word_txt = "-1", word_txt[1:].strip()
            coeff = Fraction(coeff_txt) if coeff_txt else Fraction(1)
            elem = elem + normal_order(parse_modes(word_txt or "1"), coeff)
        return elem

    @classmethod
    def from_real(cls, vec: dict) -> "Element":
        return cls({m: Scalar(c) for m, c in vec.items()})

    def real_parts(self) -> tuple[dict, dict]:
        re_part = {m: c.re for m, c in self.terms.items() if c.re}
        im_part = {m: c.im for m, c in self.terms.items() if c.im}
        return re_part, im_part

    def is_zero(self) -> bool:
        return not self.terms

    def bidegrees(self) -> set:
        return {m.bidegree for m in self.terms}

    def is_bihomogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def components(self) -> dict:
        """Split into bihomogeneous pieces keyed by (charge, 4*weight)."""
        out: dict = {}
        for m, c in self.terms.items():
            out.setdefault(m.bidegree, {})[m] = c
        return {b: Element(t) for b, t in sorted(out.items())}

    def negative_part(self) -> "Element":
        """Drop plus-class monomials (their classes vanish on cyclic vectors)."""
        return Element({m: c for m, c in self.terms.items() if not m.is_plus_class()})

    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items(), key=lambda mc: monomial_sort_key(mc[0])))

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Scalar()) + c
        return Element(out)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self.terms.items()})

    def scale(self, coeff) -> "Element":
        coeff = Scalar.of(coeff)
        return Element({m: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            out = Element()
            for m, c in self.terms.items():
                for n, d in other.terms.items():
                    out = out + normal_order(m.modes() + n.modes(), c * d)
            return out
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self:
            mono = render_monomial(m)
            if c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append(f"-{mono}")
            else:
                txt = str(c)
                parts.append(f"({txt}) {mono}" if not c.is_real() else f"{txt} {mono}")
        return " + ".join(parts).replace("+ -", "- ")


def monomial_sort_key(m: NormalMonomial):
    """Deterministic order: more x1 letters first, then lexicographic degrees."""
    return (-len(m.a1), m.a1, m.a12)


def normal_order(word: list, coeff=1, strategy: str = "fold") -> Element:
    """The element of U equal to the product of ``word`` (a list of Modes), in canonical form.

    ``strategy`` is ``"fold"`` (default), ``"left"`` or ``"right"``; all give
    the same result, the latter two by adjacent exchanges.
    """
    w = _internal_word(word)
    if strategy == "fold":
        vec = order_word_fold(w)
    else:
        vec = order_word_exchange(w, strategy)
    coeff = Scalar.of(coeff)
    return Element({m: coeff * c for m, c in vec.items()})


# ---------------------------------------------------------------------------
# shifting automorphism and the map psi

def tau_monomial(m: NormalMonomial, inverse: bool = False) -> tuple[NormalMonomial, Scalar]:
    """Image of one monomial: x1(m) -> (-i) x1(m + 1/2), x12(n) -> x12(n + 1); inverse undoes it."""
    s1, s12 = (-2, -4) if inverse else (2, 4)
    unit = i_power(len(m.a1)) if inverse else i_power(-len(m.a1))
    return NormalMonomial(tuple(d + s1 for d in m.a1), tuple(d + s12 for d in m.a12)), unit


def tau(a: Element, direction: str = "forward") -> Element:
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    out = {}
    for m, c in a.terms.items():
        image, unit = tau_monomial(m, direction == "inverse")
        out[image] = c * unit
    return Element(out)


def psi(a: Element) -> Element:
    """a -> tau^{-1}(a) * x1(-1/4)."""
    return tau(a, "inverse") * Element.monomial(NormalMonomial((-1,), ()))
