"""Exact arithmetic in Q, Q(sqrt 3) and Q(sqrt 5).

Rationals are plain :class:`fractions.Fraction` values. :class:`QuadExt`
wraps ``a + b*sqrt(m)`` and keeps the representation normalised so that
structural equality is numerical equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

SUPPORTED_RADICANDS = (1, 3, 5)

Scalar = Union["QuadExt", Fraction, int]

_FZERO = Fraction(0)


class MixedRadicalError(ValueError):
    """Raised when an operation would combine sqrt(3) with sqrt(5)."""


@dataclass(frozen=True, slots=True)
class QuadExt:
    """The number ``a + b*sqrt(m)``; ``m == 1`` means a plain rational."""

    a: Fraction
    b: Fraction = Fraction(0)
    m: int = 1

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        if self.m not in SUPPORTED_RADICANDS:
            raise ValueError(f"unsupported radicand {self.m}")
        m = self.m
        if m == 1:
            a, b = a + b, Fraction(0)
        elif b == 0:
            m = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    # construction helpers

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, m: int) -> QuadExt:
        # trusted constructor for already-normalised parts
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "m", m)
        return obj

    @classmethod
    def _rat(cls, a: Fraction) -> QuadExt:
        return cls._make(a, _FZERO, 1)

    @classmethod
    def coerce(cls, x: Scalar) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, int):
            return cls._rat(Fraction(x))
        if isinstance(x, Rational):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadExt")

    @classmethod
    def sqrt(cls, m: int) -> QuadExt:
        return cls(Fraction(0), Fraction(1), m)

    @property
    def is_rational(self) -> bool:
        return self.m == 1

    def _common(self, other: QuadExt) -> int:
        if self.m == other.m or other.m == 1:
            return self.m
        if self.m == 1:
            return other.m
        raise MixedRadicalError(f"cannot mix sqrt({self.m}) and sqrt({other.m})")

    # arithmetic

    def __add__(self, other: Scalar) -> QuadExt:
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        if self.m == 1 and o.m == 1:
            return QuadExt._rat(self.a + o.a)
        return QuadExt(self.a + o.a, self.b + o.b, self._common(o))

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt._make(-self.a, -self.b, self.m)

    def __sub__(self, other: Scalar) -> QuadExt:
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> QuadExt:
        return QuadExt.coerce(other) - self

    def __mul__(self, other: Scalar) -> QuadExt:
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        if o.m == 1:
            if self.m == 1:
                return QuadExt._rat(self.a * o.a)
            return QuadExt(self.a * o.a, self.b * o.a, self.m)
        if self.m == 1:
            return QuadExt(self.a * o.a, self.a * o.b, o.m)
        m = self._common(o)
        return QuadExt(self.a * o.a + m * self.b * o.b, self.a * o.b + self.b * o.a, m)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - m b^2``; zero only for the zero element."""
        return self.a * self.a - self.m * self.b * self.b

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        c = self.conjugate()
        return QuadExt(c.a / n, c.b / n, self.m)

    def __truediv__(self, other: Scalar) -> QuadExt:
        try:
            o = QuadExt.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> QuadExt:
        return QuadExt.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> QuadExt:
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        out = QuadExt(Fraction(1))
        for _ in range(abs(e)):
            out = out * base
        return out

    # comparison

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Rational)):
            other = QuadExt(Fraction(other))
        if not isinstance(other, QuadExt):
            return NotImplemented
        return (self.a, self.b, self.m) == (other.a, other.b, other.m)

    def __hash__(self) -> int:
        if self.m == 1:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(m)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with m b^2
        diff = self.a * self.a - self.m * self.b * self.b
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def _cmp(self, other: Scalar) -> int:
        return (self - QuadExt.coerce(other)).sign()

    def __lt__(self, other: Scalar) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Scalar) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Scalar) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Scalar) -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def to_fraction(self) -> Fraction:
        if self.m != 1:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __str__(self) -> str:
        if self.m == 1:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.m})"

    def __repr__(self) -> str:
        return f"QuadExt({self})"


ZERO = QuadExt(Fraction(0))
ONE = QuadExt(Fraction(1))

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)

# cos(d degrees) for the first-quadrant angles that live in Q(sqrt 3) or Q(sqrt 5)
_FIRST_QUADRANT = {
    0: QuadExt(Fraction(1)),
    30: QuadExt(Fraction(0), _HALF, 3),
    36: QuadExt(_QUARTER, _QUARTER, 5),
    60: QuadExt(_HALF),
    72: QuadExt(-_QUARTER, _QUARTER, 5),
    90: QuadExt(Fraction(0)),
}

SUPPORTED_DENOMINATORS = (1, 2, 3, 4, 5, 6, 10, 12)


def exact_cos(j: int, q: int) -> QuadExt:
    """Exact ``cos(2*pi*j/q)``.

    The reduced angle ``j/q`` must have denominator in
    :data:`SUPPORTED_DENOMINATORS`; anything else raises ``ValueError`` so the
    caller never silently falls back to floating point.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    f = Fraction(j, q) % 1
    if f.denominator not in SUPPORTED_DENOMINATORS:
        raise ValueError(f"cos(2*pi*{j}/{q}) is not in Q(sqrt3) or Q(sqrt5)")
    deg = int(f * 360)
    if deg > 180:
        deg = 360 - deg
    if deg > 90:
        return -_FIRST_QUADRANT[180 - deg]
    return _FIRST_QUADRANT[deg]


def exact_sin(j: int, q: int) -> QuadExt:
    """Exact ``sin(2*pi*j/q)`` via ``cos(pi/2 - x)``; same support rules."""
    f = Fraction(1, 4) - Fraction(j, q)
    return exact_cos(f.numerator, f.denominator)


def parse_quadext(text: str) -> QuadExt:
    """Inverse of ``str(QuadExt)``: accepts ``a`` or ``a + b*sqrt(m)``."""
    text = text.strip()
    if "sqrt(" not in text:
        return QuadExt(Fraction(text))
    head, tail = text.rsplit(" + ", 1)
    coeff, rad = tail.split("*sqrt(")
    return QuadExt(Fraction(head), Fraction(coeff), int(rad.rstrip(")")))
