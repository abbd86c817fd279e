"""Ordered-field scalars: rationals, one real quadratic extension, and floats.

A :class:`FieldSpec` is the single place that knows how to coerce, compare,
parse and print scalars of its kind.  All other modules ask the field for
``sign`` / ``is_zero`` instead of comparing against ``0`` directly, which is
what makes the float mode's tolerance and the exact modes interchangeable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union


class FieldError(ValueError):
    pass


def _is_squarefree(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


@total_ordering
class QuadraticNumber:
    """The number ``a + b*sqrt(m)`` with rational ``a``, ``b``."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b, m: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.m = m

    def _lift(self, other):
        if isinstance(other, QuadraticNumber):
            if other.m != self.m:
                raise FieldError(f"mixing sqrt({self.m}) and sqrt({other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.m)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.m)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(
            self.a * o.a + self.m * self.b * o.b, self.a * o.b + self.b * o.a, self.m
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.m)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        p = self * o.conjugate()
        return QuadraticNumber(p.a / n, p.b / n, self.m)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticNumber(1, 0, self.m) / (self ** (-k))
        out = QuadraticNumber(1, 0, self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        # exact: compare a^2 with m b^2 when the parts disagree in sign
        sa, sb = _sgn(self.a), _sgn(self.b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        return sa * _sgn(self.a * self.a - self.m * self.b * self.b)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.m})"

    def __str__(self):
        return format_quadratic(self)


def format_quadratic(x: QuadraticNumber) -> str:
    if x.b == 0:
        return str(x.a)
    tail = "rt" if abs(x.b) == 1 else f"{abs(x.b)}*rt"
    if x.a == 0:
        return ("-" if x.b < 0 else "") + tail
    return f"{x.a}{'-' if x.b < 0 else '+'}{tail}"


Scalar = Union[Fraction, QuadraticNumber, float]

_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^(?:(?P<a>{_RAT})(?=[+-]|$))?(?:(?P<bsign>[+-]?)(?:(?P<b>\d+(?:/\d+)?)\*)?rt)?$"
)


@dataclass(frozen=True)
class FieldSpec:
    """Which ordered field scalars live in.

    ``kind`` is ``"rational"``, ``"quadratic"`` (with square-free ``m >= 2``)
    or ``"float"`` (with a positive zero ``tolerance``).  Float verdicts are
    advisory: they depend on ``tolerance``.
    """

    kind: str = "rational"
    m: int = 0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.kind == "quadratic":
            if not _is_squarefree(self.m):
                raise FieldError(f"quadratic field needs square-free m >= 2, got {self.m}")
        elif self.kind == "float":
            if not self.tolerance > 0:
                raise FieldError("float tolerance must be positive")
        elif self.kind != "rational":
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> FieldSpec:
        return cls("rational")

    @classmethod
    def quadratic(cls, m: int) -> FieldSpec:
        return cls("quadratic", m=m)

    @classmethod
    def float(cls, tolerance: float = 1e-9) -> FieldSpec:
        return cls("float", tolerance=tolerance)

    @property
    def exact(self) -> bool:
        return self.kind != "float"

    def zero(self) -> Scalar:
        return self.coerce(0)

    def one(self) -> Scalar:
        return self.coerce(1)

    def sqrt_m(self) -> QuadraticNumber:
        if self.kind != "quadratic":
            raise FieldError("rt only exists in a quadratic field")
        return QuadraticNumber(0, 1, self.m)

    def coerce(self, x) -> Scalar:
        if self.kind == "float":
            return float(x)
        if isinstance(x, float):
            raise FieldError(f"refusing to coerce float {x!r} into an exact field")
        if self.kind == "rational":
            if isinstance(x, QuadraticNumber):
                if x.b != 0:
                    raise FieldError(f"{x} is irrational")
                return x.a
            return Fraction(x)
        if isinstance(x, QuadraticNumber):
            if x.m != self.m and x.b != 0:
                raise FieldError(f"{x} is not in Q(sqrt({self.m}))")
            return QuadraticNumber(x.a, x.b, self.m)
        return QuadraticNumber(Fraction(x), 0, self.m)

    def sign(self, x: Scalar) -> int:
        if self.kind == "float":
            if abs(x) <= self.tolerance:
                return 0
            return 1 if x > 0 else -1
        if isinstance(x, QuadraticNumber):
            return x.sign()
        return _sgn(x)

    def is_zero(self, x: Scalar) -> bool:
        return self.sign(x) == 0

    def parse(self, text: str) -> Scalar:
        s = text.strip().replace(" ", "")
        if not s:
            raise FieldError("empty scalar")
        if self.kind == "float":
            try:
                return float(s)
            except ValueError:
                raise FieldError(f"bad float literal {text!r}") from None
        if self.kind == "rational":
            if not re.fullmatch(_RAT, s):
                raise FieldError(f"bad rational literal {text!r}")
            return Fraction(s)
        mt = _QUAD_RE.match(s)
        if not mt or (mt.group("a") is None and "rt" not in s):
            raise FieldError(f"bad quadratic literal {text!r}")
        a = Fraction(mt.group("a")) if mt.group("a") else Fraction(0)
        b = Fraction(0)
        if "rt" in s:
            b = Fraction(mt.group("b")) if mt.group("b") else Fraction(1)
            if mt.group("bsign") == "-":
                b = -b
        return QuadraticNumber(a, b, self.m)

    def format(self, x: Scalar) -> str:
        if self.kind == "float":
            return repr(float(x))
        x = self.coerce(x)
        if isinstance(x, QuadraticNumber):
            return format_quadratic(x)
        return str(x)

    def describe(self) -> str:
        if self.kind == "quadratic":
            return f"quadratic {self.m}"
        if self.kind == "float":
            return f"float {self.tolerance!r}"
        return "rational"

    @classmethod
    def from_description(cls, text: str) -> FieldSpec:
        parts = text.split()
        if parts == ["rational"]:
            return cls.rational()
        if len(parts) == 2 and parts[0] == "quadratic":
            return cls.quadratic(int(parts[1]))
        if len(parts) == 2 and parts[0] == "float":
            return cls.float(float(parts[1]))
        raise FieldError(f"bad field description {text!r}")


def to_float(x: Scalar) -> float:
    return float(x)
