"""Walls in the projection plane and the finite search for destabilizing classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Tuple

from .certificates import register_check
from .geometry import Line, PlanePoint, Rational
from .lattice import MukaiVector, SurfaceParams, is_perfect_square, project, square
from .radicals import RadicalValue
from .stability_plane import (StabilityParams, above_parabola, central_charge, is_valid_stability_point,
                              params_from_point, same_phase)


class WallError(ValueError):
    pass


class ProportionalClasses(WallError):
    pass


class UnderdeterminedWall(WallError):
    pass


class EmptyWindow(WallError):
    pass


class NoWallFound(WallError):
    pass


def _proportional(a: MukaiVector, b: MukaiVector) -> bool:
    return (a.r * b.c - a.c * b.r == 0 and a.r * b.s - a.s * b.r == 0
            and a.c * b.s - a.s * b.c == 0)


def wall_line(v: MukaiVector, v1: MukaiVector, surf: SurfaceParams) -> Line:
    """The line on which v and v1 have equal phase."""
    if _proportional(v, v1):
        raise ProportionalClasses(f"{v} and {v1} are proportional; their phases always agree")
    if v.s != 0 and v1.s != 0:
        return Line.through(project(v), project(v1))
    if v.s == 0 and v1.s == 0:
        raise UnderdeterminedWall("both classes have s = 0")
    # a class with s = 0 fixes the direction (c, r) instead of a point
    flat, other = (v, v1) if v.s == 0 else (v1, v)
    return Line.through_with_direction(project(other), flat.c, flat.r)


def no_wall_at_b(v: MukaiVector, b0_num: int, b0_den: int) -> bool:
    """True when n c - m r = +-1 for b0 = m/n, which rules out walls meeting x = b0 y."""
    if b0_den == 0:
        raise WallError("b0 denominator is zero")
    if gcd(b0_num, b0_den) != 1:
        raise WallError(f"b0 = {b0_num}/{b0_den} is not in lowest terms")
    return abs(b0_den * v.c - b0_num * v.r) == 1


@register_check("no_wall_at_b")
def _check_no_wall(a: Dict[str, Any]) -> bool:
    return no_wall_at_b(a["v"], int(a["m"]), int(a["n"]))


# --- chord of a line with the parabola ------------------------------------------

@dataclass(frozen=True)
class Chord:
    """The part of a non-vertical line above y = (H^2/2) x^2, by its two abscissae."""

    line: Line
    left_x: RadicalValue
    right_x: RadicalValue
    discriminant: int

    def endpoints(self) -> Optional[Tuple[PlanePoint, PlanePoint]]:
        """Exact endpoints when they are rational."""
        if not (self.left_x.is_rational() and self.right_x.is_rational()):
            return None
        lx, rx = self.left_x.rational, self.right_x.rational
        return (PlanePoint(lx, self.line.y_at(lx)), PlanePoint(rx, self.line.y_at(rx)))

    def float_endpoints(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        out = []
        for x in (self.left_x, self.right_x):
            fx = float(x)
            out.append((fx, float((self.line.d - self.line.a * Fraction(fx)) / self.line.b)))
        return out[0], out[1]


def chord(line: Line, surf: SurfaceParams) -> Optional[Chord]:
    if line.b == 0:
        return None
    h = surf.half
    a, b, d = line.a, line.b, line.d
    disc = a * a + 4 * b * h * d
    if disc <= 0:
        return None
    base = Fraction(-a, 2 * b * h)
    step = Fraction(1, 2 * b * h)
    x1 = base + step * RadicalValue.sqrt(disc)
    x2 = base - step * RadicalValue.sqrt(disc)
    if b < 0:
        x1, x2 = x2, x1
    return Chord(line, x2, x1, disc)


# --- slope windows ------------------------------------------------------------

@dataclass(frozen=True)
class SlopeWindow:
    """Rational bounds x1/y1 <= x2/y2 taken at the ends of a wall segment."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if self.lower > self.upper:
            raise EmptyWindow(f"window [{self.lower}, {self.upper}] is empty")

    @classmethod
    def between(cls, left: PlanePoint, right: PlanePoint) -> "SlopeWindow":
        a, b = left.x / left.y, right.x / right.y
        return cls(min(a, b), max(a, b))

    def admits(self, u: MukaiVector) -> bool:
        # positive rank behaves like a sheaf, negative rank like a shifted one
        if u.r > 0:
            return Fraction(u.c, u.r) >= self.upper
        if u.r < 0:
            return Fraction(u.c, u.r) <= self.lower
        return u.c >= 0


def _chord_admits(ch: Chord, u: MukaiVector, surf: SurfaceParams) -> bool:
    """SlopeWindow.admits with the window read off the chord endpoints exactly."""
    h = surf.half
    if u.r > 0:
        # c/r >= 1/(h x_right) with x_right > 0
        return (u.c * h * ch.right_x - u.r).sign() >= 0
    if u.r < 0:
        # c/r <= 1/(h x_left) with x_left < 0 and r < 0
        return (u.c * h * ch.left_x - u.r).sign() <= 0
    return u.c >= 0


# --- walls --------------------------------------------------------------------

@dataclass(frozen=True)
class Wall:
    line: Line
    witness: Tuple[MukaiVector, MukaiVector]
    probe_point: PlanePoint
    chord: Optional[Chord] = None
    alternatives: Tuple[MukaiVector, ...] = ()

    @property
    def segment(self) -> Optional[Tuple[PlanePoint, PlanePoint]]:
        return None if self.chord is None else self.chord.endpoints()

    def to_json(self) -> Dict[str, Any]:
        from .certificates import encode

        seg = self.segment
        return {
            "line": encode(self.line),
            "witness": [encode(w) for w in self.witness],
            "probe_point": encode(self.probe_point),
            "segment": None if seg is None else [encode(p) for p in seg],
            "alternatives": [encode(w) for w in self.alternatives],
        }


def default_bounds(v: MukaiVector, surf: SurfaceParams) -> int:
    return 4 * (abs(v.r) + abs(v.s) + abs(v.c) * surf.h2)


def _sample_point(probe: Line, surf: SurfaceParams) -> PlanePoint:
    if probe.b != 0:
        y0 = probe.y_at(0)
        if y0 > 0:
            return PlanePoint(0, y0)
        xm = Fraction(-probe.a, 2 * probe.b * surf.half)
        return PlanePoint(xm, probe.y_at(xm))
    x0 = Fraction(probe.d, probe.a)
    return PlanePoint(x0, surf.half * x0 * x0 + 1)


def _sides_ok(v: MukaiVector, v1: MukaiVector, b: Fraction, surf: SurfaceParams) -> bool:
    v2 = v - v1
    if not (v1.c - b * v1.r > 0 and v2.c - b * v2.r > 0):
        return False
    # the sub is semistable, the quotient may be taken stable
    if square(v1, surf) < -2 * v1.c * v1.c or square(v2, surf) < -2:
        return False
    # a sub-sheaf of a sheaf supported on the curve restricts with full rank
    if v.r == 0 and v1.r < v.c:
        return False
    return True


def enumerate_destabilizer_candidates(
    v: MukaiVector,
    probe: Line,
    window: SlopeWindow,
    surf: SurfaceParams,
    bounds: Optional[int] = None,
) -> List[Tuple[MukaiVector, Wall]]:
    """Classes v1 whose equal-phase line with v is `probe` and that pass the numeric filters."""
    if window.lower > window.upper:
        raise EmptyWindow("slope window is empty")
    bound = default_bounds(v, surf) if bounds is None else bounds
    sample = _sample_point(probe, surf)
    b = sample.x / sample.y
    sp = params_from_point(sample, surf) if above_parabola(sample, surf) else None
    out = []
    for r1 in range(-bound, bound + 1):
        # Im Z > 0 on both sides: b r1 < c1 < c - b (r - r1)
        lo = b * r1
        hi = v.c - b * (v.r - r1)
        c_lo = int(lo) - 1
        for c1 in range(max(-bound, c_lo), min(bound, int(hi) + 1) + 1):
            if not (lo < c1 < hi):
                continue
            s_options = set([0])
            if probe.d != 0:
                num = probe.a * c1 + probe.b * r1
                if num % probe.d == 0:
                    s_options.add(num // probe.d)
            elif probe.a * c1 + probe.b * r1 == 0:
                s_options.update(range(-bound, bound + 1))
            for s1 in sorted(s_options):
                if abs(s1) > bound:
                    continue
                v1 = MukaiVector(r1, c1, s1)
                try:
                    if wall_line(v, v1, surf) != probe:
                        continue
                except WallError:
                    continue
                if not _sides_ok(v, v1, b, surf):
                    continue
                if not (window.admits(v1) and window.admits(v - v1)):
                    continue
                if sp is not None and not same_phase(central_charge(v, sp, surf), central_charge(v1, sp, surf)):
                    continue
                out.append((v1, Wall(probe, (v1, v - v1), sample, chord(probe, surf))))
    out.sort(key=lambda item: item[0].as_tuple())
    return out


def enumerate_hn_factor_candidates(v: MukaiVector, surf: SurfaceParams,
                                   bounds: Optional[int] = None) -> List[MukaiVector]:
    """Classes (r1, c1, s1) with 0 < c1 <= c(v), r1 s1 <= c1^2 (H^2/2 + 1), and
    max(|r1|, |s1|) < 2|r(v)| + |s(v)| whenever r1 s1 <= 0."""
    if v.c <= 0:
        raise WallError(f"need c(v) > 0, got {v}")
    cap = bounds if bounds is not None else None
    small = 2 * abs(v.r) + abs(v.s)
    out = []
    for c1 in range(1, v.c + 1):
        prod = c1 * c1 * (surf.half + 1)
        # r1 s1 <= 0 part
        for r1 in range(-small + 1, small):
            for s1 in range(-small + 1, small):
                if r1 * s1 <= 0:
                    out.append(MukaiVector(r1, c1, s1))
        # r1 s1 > 0 part: both nonzero with the same sign and |r1 s1| <= prod
        for r1 in range(1, prod + 1):
            for s1 in range(1, prod // r1 + 1):
                out.append(MukaiVector(r1, c1, s1))
                out.append(MukaiVector(-r1, c1, -s1))
    if cap is not None:
        out = [u for u in out if abs(u.r) <= cap and abs(u.s) <= cap]
    out.sort()
    return out


# --- first wall on the line b = 0 -----------------------------------------------

@dataclass
class FirstWallResult:
    wall: Wall
    candidates: List[Tuple[MukaiVector, Fraction]] = field(default_factory=list)
    bounds: int = 0

    def heights(self) -> List[Fraction]:
        return sorted({y for _, y in self.candidates})


def _probe_height(v: MukaiVector, v1: MukaiVector) -> Optional[Fraction]:
    """y where the equal-phase line of v = (0, c, s) and v1 meets x = 0."""
    den = v.c * v1.s - v1.c * v.s
    if den == 0:
        return None
    return Fraction(v1.r * v.c, den)


def first_wall_candidates(v: MukaiVector, surf: SurfaceParams, bounds: Optional[int] = None,
                          window: Optional[SlopeWindow] = None) -> List[Tuple[MukaiVector, Fraction]]:
    """All numerically admissible destabilizing classes for b = 0 with their probe heights.

    Without `window` the slope bounds come from the ends of each candidate's own chord.
    """
    if v.r != 0 or v.c <= 0:
        raise WallError(f"first-wall search needs r = 0 and c > 0, got {v}")
    bound = default_bounds(v, surf) if bounds is None else bounds
    found = []
    for r1 in range(max(1, v.c), bound + 1):
        for c1 in range(1, v.c):
            c2 = v.c - c1
            # square(v1) >= -2 c1^2 and square(v - v1) >= -2
            s_top = min((c1 * c1 * (surf.h2 + 2)) // (2 * r1),
                        v.s + (c2 * c2 * surf.h2 + 2) // (2 * r1))
            # 0 < y < 1 on x = 0 means s1 > r1 + c1 s(v)/c(v)
            s_low = Fraction(r1) + Fraction(c1 * v.s, v.c)
            s_start = max(-bound, int(s_low // 1) + 1)
            for s1 in range(s_start, min(bound, s_top) + 1):
                v1 = MukaiVector(r1, c1, s1)
                y0 = _probe_height(v, v1)
                if y0 is None or not (0 < y0 < 1):
                    continue
                if not _sides_ok(v, v1, Fraction(0), surf):
                    continue
                try:
                    line = wall_line(v, v1, surf)
                except WallError:
                    continue
                ch = chord(line, surf)
                if ch is None:
                    continue
                if window is not None:
                    if not (window.admits(v1) and window.admits(v - v1)):
                        continue
                elif not (_chord_admits(ch, v1, surf) and _chord_admits(ch, v - v1, surf)):
                    continue
                if not is_valid_stability_point(PlanePoint(0, y0), surf):
                    continue
                found.append((v1, y0))
    found.sort(key=lambda item: (item[1], item[0].as_tuple()))
    return found


def gieseker_first_wall(v: MukaiVector, surf: SurfaceParams, bounds: Optional[int] = None) -> FirstWallResult:
    """The admissible wall met first when leaving the large-volume chamber along b = 0.

    Large w pushes k(0, w) towards the origin, so the first wall is the one
    crossing x = 0 at the smallest height.
    """
    bound = default_bounds(v, surf) if bounds is None else bounds
    cands = first_wall_candidates(v, surf, bound)
    if not cands:
        raise NoWallFound(f"no admissible wall for {v} within bounds {bound}")
    y_min = cands[0][1]
    tied = [v1 for v1, y in cands if y == y_min]
    lines = {wall_line(v, v1, surf) for v1 in tied}
    if len(lines) > 1:
        raise WallError(f"witnesses at height {y_min} disagree on the wall line")
    line = lines.pop()
    witness = tied[0]
    wall = Wall(line, (witness, v - witness), PlanePoint(0, y_min), chord(line, surf), tuple(tied[1:]))
    return FirstWallResult(wall, cands, bound)


@register_check("same_phase_at")
def _check_same_phase(a: Dict[str, Any]) -> bool:
    surf = SurfaceParams(int(a["h2"]))
    pt: PlanePoint = a["point"]
    sp = params_from_point(pt, surf)
    return same_phase(central_charge(a["v"], sp, surf), central_charge(a["v1"], sp, surf))


@register_check("first_wall")
def _check_first_wall(a: Dict[str, Any]) -> bool:
    surf = SurfaceParams(int(a["h2"]))
    res = gieseker_first_wall(a["v"], surf, int(a["bounds"]))
    return res.wall.line == a["line"] and res.wall.witness[0] == a["witness"]


def point_on_wall(line: Line, x: Rational) -> PlanePoint:
    return PlanePoint(Fraction(x), line.y_at(x))


__all__ = [
    "Chord", "EmptyWindow", "FirstWallResult", "Line", "NoWallFound", "ProportionalClasses",
    "SlopeWindow", "StabilityParams", "UnderdeterminedWall", "Wall", "WallError", "chord",
    "default_bounds", "enumerate_destabilizer_candidates", "enumerate_hn_factor_candidates",
    "first_wall_candidates", "gieseker_first_wall", "no_wall_at_b", "point_on_wall", "wall_line",
    "is_perfect_square",
]
