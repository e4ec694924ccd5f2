"""Global-section bounds from the weighted norm of central charges."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .certificates import register_check
from .geometry import Rational
from .lattice import MukaiVector, SurfaceParams, euler_char
from .radicals import (DEFAULT_BITS, MAX_BITS, ComparisonCertificate, NestedRadical, RadicalValue,
                       UndecidedComparison, compare_radicals)
from .stability_plane import ChargeValue

__all__ = [
    "ComparisonCertificate", "FloorCertificate", "HNPolygon", "NestedRadical", "PolygonError",
    "RadicalValue", "UndecidedComparison", "bn_norm", "compare_radicals", "h0_bound_polygon",
    "h0_bound_wall", "norm_weight", "polygon_mass", "zbar",
]


class PolygonError(ValueError):
    pass


def zbar(v: MukaiVector) -> ChargeValue:
    """Central charge at b = 0, w^2 = 2/H^2: (r - s) + i c."""
    return ChargeValue(v.r - v.s, v.c)


def norm_weight(surf: SurfaceParams) -> int:
    return 2 * surf.h2 + 4


def bn_norm(re: Rational, im: Rational, surf: SurfaceParams) -> RadicalValue:
    """sqrt(re^2 + (2H^2 + 4) im^2)."""
    re, im = Fraction(re), Fraction(im)
    return RadicalValue.sqrt(re * re + norm_weight(surf) * im * im)


@dataclass(frozen=True)
class FloorCertificate:
    value: RadicalValue
    floor: int
    interval: Tuple[Fraction, Fraction]
    bits: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "value": self.value.to_json(),
            "floor": self.floor,
            "interval": [{"num": str(x.numerator), "den": str(x.denominator)} for x in self.interval],
            "bits": self.bits,
        }


def certified_floor(value: RadicalValue, max_bits: int = MAX_BITS, start_bits: int = DEFAULT_BITS) -> FloorCertificate:
    f, interval, bits = value.floor(max_bits, start_bits)
    return FloorCertificate(value, f, interval, bits)


@register_check("radical_floor")
def _check_floor(a: Dict[str, Any]) -> bool:
    value: RadicalValue = a["value"]
    f = int(a["floor"])
    return compare_radicals(value, f).ordering >= 0 and compare_radicals(value, f + 1).ordering < 0


def h0_bound_wall(v: MukaiVector, surf: SurfaceParams) -> FloorCertificate:
    """chi/2 + sqrt((r - s)^2 + c^2 (2H^2 + 4))/2 with its certified floor."""
    z = zbar(v)
    bound = Fraction(euler_char(v), 2) + bn_norm(z.re, z.im, surf) * Fraction(1, 2)
    return certified_floor(bound)


@dataclass(frozen=True)
class HNPolygon:
    """Convex chain of charge values starting at the origin.

    The imaginary parts increase strictly and the edge phases decrease
    strictly, so the chain bends clockwise when walked from the origin.
    """

    vertices: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        verts = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise PolygonError("a polygon needs at least two vertices")
        if verts[0] != (0, 0):
            raise PolygonError(f"chain must start at the origin, got {verts[0]}")
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            if y1 <= y0:
                raise PolygonError("imaginary parts must increase strictly")
        for a, b, c in zip(verts, verts[1:], verts[2:]):
            turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if turn >= 0:
                raise PolygonError(f"chain is not convex at {b}")

    @classmethod
    def from_points(cls, points: Sequence[Tuple[Rational, Rational]]) -> "HNPolygon":
        return cls(tuple(points))

    @classmethod
    def from_charges(cls, charges: Sequence[ChargeValue]) -> "HNPolygon":
        return cls(((Fraction(0), Fraction(0)),) + tuple((z.re, z.im) for z in charges))

    @property
    def endpoint(self) -> Tuple[Fraction, Fraction]:
        return self.vertices[-1]

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 and y.denominator == 1 for x, y in self.vertices)

    def edges(self) -> List[Tuple[Fraction, Fraction]]:
        return [(b[0] - a[0], b[1] - a[1]) for a, b in zip(self.vertices, self.vertices[1:])]


def polygon_mass(poly: HNPolygon, surf: SurfaceParams) -> RadicalValue:
    total = RadicalValue(Fraction(0))
    for dx, dy in poly.edges():
        total = total + bn_norm(dx, dy, surf)
    return total


def h0_bound_polygon(v: MukaiVector, poly: HNPolygon, surf: SurfaceParams) -> FloorCertificate:
    z = zbar(v)
    if poly.endpoint != (z.re, z.im):
        raise PolygonError(f"polygon ends at {poly.endpoint}, but Zbar(v) = ({z.re}, {z.im})")
    bound = Fraction(euler_char(v), 2) + polygon_mass(poly, surf) * Fraction(1, 2)
    return certified_floor(bound)


def radical_check(left: Any, right: Any, relation: str) -> bool:
    c = compare_radicals(left, right).ordering
    return {"gt": c > 0, "ge": c >= 0, "lt": c < 0, "le": c <= 0, "eq": c == 0}[relation]


@register_check("radical_compare")
def _check_radicals(a: Dict[str, Any]) -> bool:
    return radical_check(a["left"], a["right"], a["relation"])
