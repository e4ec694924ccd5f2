"""The rank-three Mukai lattice of a K3 surface with Picard group generated by H."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import TYPE_CHECKING, Iterator, List, Optional, Union

from .geometry import PlanePoint

if TYPE_CHECKING:
    from .stability_plane import Region


class LatticeError(ValueError):
    pass


class UndefinedProjection(LatticeError):
    pass


@dataclass(frozen=True)
class SurfaceParams:
    """Polarised K3 datum; only the degree H^2 enters the numerics."""

    h2: int

    def __post_init__(self) -> None:
        if isinstance(self.h2, bool) or not isinstance(self.h2, int):
            raise LatticeError(f"h2 must be an integer, got {self.h2!r}")
        if self.h2 < 2 or self.h2 % 2:
            raise LatticeError(f"h2 must be a positive even integer, got {self.h2}")

    @property
    def genus(self) -> int:
        return self.h2 // 2 + 1

    @property
    def half(self) -> int:
        """H^2 / 2, the leading coefficient of the parabola y = (H^2/2) x^2."""
        return self.h2 // 2


@dataclass(frozen=True, order=True)
class MukaiVector:
    """Integer triple (r, c, s) standing for (r, cH, s)."""

    r: int
    c: int
    s: int

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.c + other.c, self.s + other.s)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.c - other.c, self.s - other.s)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, -self.c, -self.s)

    def __mul__(self, k: int) -> "MukaiVector":
        return MukaiVector(k * self.r, k * self.c, k * self.s)

    __rmul__ = __mul__

    def as_tuple(self) -> tuple:
        return (self.r, self.c, self.s)

    def __str__(self) -> str:
        return f"({self.r},{self.c},{self.s})"


class _PositiveInfinity:
    """Slope of a rank-zero class."""

    _instance: Optional["_PositiveInfinity"] = None

    def __new__(cls) -> "_PositiveInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "+inf"

    def _cmp(self, other: object) -> int:
        if other is self:
            return 0
        if isinstance(other, (int, Fraction)):
            return 1
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        res = self._cmp(other)
        return res if res is NotImplemented else res < 0

    def __le__(self, other: object) -> bool:
        res = self._cmp(other)
        return res if res is NotImplemented else res <= 0

    def __gt__(self, other: object) -> bool:
        res = self._cmp(other)
        return res if res is NotImplemented else res > 0

    def __ge__(self, other: object) -> bool:
        res = self._cmp(other)
        return res if res is NotImplemented else res >= 0


INFINITY = _PositiveInfinity()
Slope = Union[Fraction, _PositiveInfinity]


def pairing(a: MukaiVector, b: MukaiVector, surf: SurfaceParams) -> int:
    return a.c * b.c * surf.h2 - a.r * b.s - b.r * a.s


def square(v: MukaiVector, surf: SurfaceParams) -> int:
    return v.c * v.c * surf.h2 - 2 * v.r * v.s


def is_root(v: MukaiVector, surf: SurfaceParams) -> bool:
    return square(v, surf) == -2


def euler_char(v: MukaiVector) -> int:
    return v.r + v.s


def slope(v: MukaiVector) -> Slope:
    if v.r == 0:
        return INFINITY
    return Fraction(v.c, v.r)


def project(v: MukaiVector) -> PlanePoint:
    """Point (c/s, r/s) of the projection plane."""
    if v.s == 0:
        raise UndefinedProjection(f"class {v} has s = 0 and no projection")
    return PlanePoint(Fraction(v.c, v.s), Fraction(v.r, v.s))


def _roots_with_rank(surf: SurfaceParams, r: int, bound_c: int) -> Iterator[MukaiVector]:
    # r != 0; s is forced by c^2 H^2 - 2 r s = -2
    for c in range(-bound_c, bound_c + 1):
        num = c * c * surf.h2 + 2
        if num % (2 * r) == 0:
            yield MukaiVector(r, c, num // (2 * r))


def enumerate_roots_in_box(
    surf: SurfaceParams,
    bound_r: int,
    bound_c: int,
    bound_s: int,
    region: Optional["Region"] = None,
) -> List[MukaiVector]:
    """All roots with |r| <= bound_r, |c| <= bound_c, |s| <= bound_s.

    Classes with s != 0 are kept only when their projection lies in `region`
    (no region means the whole plane). Output is sorted lexicographically.
    """
    if min(bound_r, bound_c, bound_s) < 1:
        raise LatticeError("bounds must be positive")
    found = []
    # rank zero would need c^2 H^2 = -2, so there are none
    for r in range(-bound_r, bound_r + 1):
        if r == 0:
            continue
        for v in _roots_with_rank(surf, r, bound_c):
            if abs(v.s) > bound_s:
                continue
            if region is not None and v.s != 0 and not region.contains(project(v)):
                continue
            found.append(v)
    found.sort()
    return found


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
