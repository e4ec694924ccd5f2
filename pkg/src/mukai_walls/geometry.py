"""Exact points and lines of the projection plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

Rational = Union[int, Fraction]


def as_fraction(value: Union[Rational, str]) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class PlanePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))

    def __add__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x - other.x, self.y - other.y)

    def scale(self, t: Rational) -> "PlanePoint":
        return PlanePoint(self.x * t, self.y * t)

    def as_floats(self) -> tuple:
        return (float(self.x), float(self.y))

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


ORIGIN = PlanePoint(0, 0)


def cross(o: PlanePoint, a: PlanePoint, b: PlanePoint) -> Fraction:
    """z-component of (a - o) x (b - o)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def collinear(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> bool:
    return cross(a, b, c) == 0


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class Line:
    """The line a*x + b*y = d with coprime integers and a sign-normalized normal."""

    a: int
    b: int
    d: int

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0:
            raise ValueError("degenerate line: a = b = 0")
        g = gcd(gcd(self.a, self.b), self.d)
        a, b, d = self.a // g, self.b // g, self.d // g
        lead = a if a != 0 else b
        if lead < 0:
            a, b, d = -a, -b, -d
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_rational(cls, a: Rational, b: Rational, d: Rational) -> "Line":
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        den = _lcm(_lcm(a.denominator, b.denominator), d.denominator)
        return cls(int(a * den), int(b * den), int(d * den))

    @classmethod
    def through(cls, p: PlanePoint, q: PlanePoint) -> "Line":
        if p == q:
            raise ValueError("a line needs two distinct points")
        a = q.y - p.y
        b = p.x - q.x
        return cls.from_rational(a, b, a * p.x + b * p.y)

    @classmethod
    def through_with_direction(cls, p: PlanePoint, dx: Rational, dy: Rational) -> "Line":
        if dx == 0 and dy == 0:
            raise ValueError("zero direction")
        a, b = Fraction(dy), -Fraction(dx)
        return cls.from_rational(a, b, a * p.x + b * p.y)

    @classmethod
    def horizontal(cls, y: Rational) -> "Line":
        return cls.from_rational(0, 1, y)

    @classmethod
    def vertical(cls, x: Rational) -> "Line":
        return cls.from_rational(1, 0, x)

    def value(self, pt: PlanePoint) -> Fraction:
        return self.a * pt.x + self.b * pt.y - self.d

    def contains(self, pt: PlanePoint) -> bool:
        return self.value(pt) == 0

    @property
    def is_vertical(self) -> bool:
        return self.b == 0

    @property
    def is_horizontal(self) -> bool:
        return self.a == 0

    def y_at(self, x: Rational) -> Optional[Fraction]:
        if self.b == 0:
            return None
        return (self.d - self.a * Fraction(x)) / self.b

    def x_at(self, y: Rational) -> Optional[Fraction]:
        if self.a == 0:
            return None
        return (self.d - self.b * Fraction(y)) / self.a

    def intersect(self, other: "Line") -> Optional[PlanePoint]:
        det = self.a * other.b - other.a * self.b
        if det == 0:
            return None
        x = Fraction(self.d * other.b - other.d * self.b, det)
        y = Fraction(self.a * other.d - other.a * self.d, det)
        return PlanePoint(x, y)

    def __str__(self) -> str:
        return f"{self.a}x + {self.b}y = {self.d}"


def line_through_origin(pt: PlanePoint) -> Line:
    return Line.through(ORIGIN, pt)


def on_closed_segment(pt: PlanePoint, a: PlanePoint, b: PlanePoint) -> bool:
    if cross(a, b, pt) != 0:
        return False
    return (min(a.x, b.x) <= pt.x <= max(a.x, b.x)
            and min(a.y, b.y) <= pt.y <= max(a.y, b.y))
