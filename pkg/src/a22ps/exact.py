"""Exact number types: quarter-integers and Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.replace("−", "-"))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_fraction(value: Fraction) -> str:
    """Render a rational as a reduced fraction, e.g. ``-3/4`` or ``2``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@total_ordering
class QuarterInt:
    """An element of (1/4)Z stored as its numerator over 4."""

    __slots__ = ("numerator",)

    def __init__(self, numerator: int):
        if not isinstance(numerator, int):
            raise TypeError("QuarterInt numerator must be an int")
        self.numerator = numerator

    @classmethod
    def of(cls, value) -> "QuarterInt":
        """Build from an int, Fraction, string like ``"-3/4"`` or a QuarterInt."""
        if isinstance(value, QuarterInt):
            return value
        f = _as_fraction(value) * 4
        if f.denominator != 1:
            raise ValueError(f"{value!r} is not in (1/4)Z")
        return cls(f.numerator)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 4)

    def is_integer(self) -> bool:
        return self.numerator % 4 == 0

    def mod_one(self) -> "QuarterInt":
        """Residue in [0, 1)."""
        return QuarterInt(self.numerator % 4)

    def mod_half(self) -> "QuarterInt":
        """Residue in [0, 1/2)."""
        return QuarterInt(self.numerator % 2)

    def __add__(self, other):
        if isinstance(other, QuarterInt):
            return QuarterInt(self.numerator + other.numerator)
        if isinstance(other, int):
            return QuarterInt(self.numerator + 4 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QuarterInt):
            return QuarterInt(self.numerator - other.numerator)
        if isinstance(other, int):
            return QuarterInt(self.numerator - 4 * other)
        return NotImplemented

    def __neg__(self):
        return QuarterInt(-self.numerator)

    def __eq__(self, other):
        if isinstance(other, QuarterInt):
            return self.numerator == other.numerator
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, QuarterInt):
            return self.numerator < other.numerator
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __repr__(self):
        return f"QuarterInt({format_fraction(self.to_fraction())})"

    def __str__(self):
        return format_fraction(self.to_fraction())


class Scalar:
    """Exact element of Q(i), kept as a pair of reduced Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_fraction(re)
        self.im = _as_fraction(im)

    @classmethod
    def of(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(value, 0)

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * Scalar(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (Scalar(1) / self) ** (-n)
        result, base = Scalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.im == 0:
            return format_fraction(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"{format_fraction(self.re)}{sign}{_imag_str(abs(self.im))}"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{format_fraction(im)}i"


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar(value, 0)
    return None


I = Scalar(0, 1)
ONE = Scalar(1, 0)
ZERO = Scalar(0, 0)


def i_power(n: int) -> Scalar:
    """Return i**n exactly."""
    return ((ONE, I, -ONE, -I))[n % 4]
