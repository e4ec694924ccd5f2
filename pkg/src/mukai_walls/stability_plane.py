"""The (b, w) family of stability conditions seen through its kernel point k(b, w)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .certificates import Certificate, register_check
from .geometry import ORIGIN, Line, PlanePoint, Rational, as_fraction, on_closed_segment
from .lattice import MukaiVector, SurfaceParams, enumerate_roots_in_box, project, square


class StabilityPlaneError(ValueError):
    pass


class DegenerateCharge(StabilityPlaneError):
    pass


class BelowParabola(StabilityPlaneError):
    pass


class NotARoot(StabilityPlaneError):
    pass


class NonPositiveRank(StabilityPlaneError):
    pass


class PreconditionViolation(StabilityPlaneError):
    def __init__(self, failures: Sequence[str]):
        self.failures = list(failures)
        super().__init__("precondition violated: " + "; ".join(self.failures))


@dataclass(frozen=True)
class StabilityParams:
    """A point (b, w) of the upper half-plane, carried as (b, w^2)."""

    b: Fraction
    w2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", as_fraction(self.b))
        object.__setattr__(self, "w2", as_fraction(self.w2))
        if self.w2 <= 0:
            raise StabilityPlaneError(f"w^2 must be positive, got {self.w2}")


@dataclass(frozen=True)
class ChargeValue:
    re: Fraction
    im: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))


def central_charge(v: MukaiVector, sp: StabilityParams, surf: SurfaceParams) -> ChargeValue:
    half = Fraction(surf.h2, 2)
    re = sp.b * v.c * surf.h2 - v.s - half * v.r * (sp.b * sp.b - sp.w2)
    im = v.c - sp.b * v.r
    return ChargeValue(re, im)


def _check_charge(z: ChargeValue) -> None:
    if z.re == 0 and z.im == 0:
        raise DegenerateCharge("the zero charge has no phase")
    if z.im < 0 or (z.im == 0 and z.re > 0):
        raise StabilityPlaneError(f"charge {z} is outside the semi-closed upper half-plane")


def compare_phase(z1: ChargeValue, z2: ChargeValue) -> int:
    """Sign of phase(z1) - phase(z2), decided without evaluating any angle."""
    _check_charge(z1)
    _check_charge(z2)
    top1, top2 = z1.im == 0, z2.im == 0
    if top1 or top2:
        return int(top1) - int(top2)
    # larger phase means smaller cotangent re/im
    det = z2.re * z1.im - z1.re * z2.im
    return (det > 0) - (det < 0)


def same_phase(z1: ChargeValue, z2: ChargeValue) -> bool:
    return z1.re * z2.im - z2.re * z1.im == 0


def kernel_point(sp: StabilityParams, surf: SurfaceParams) -> PlanePoint:
    denom = surf.h2 * (sp.b * sp.b + sp.w2)
    return PlanePoint(2 * sp.b / denom, Fraction(2) / denom)


def above_parabola(pt: PlanePoint, surf: SurfaceParams) -> bool:
    return pt.y > surf.half * pt.x * pt.x


def on_parabola(pt: PlanePoint, surf: SurfaceParams) -> bool:
    return pt.y == surf.half * pt.x * pt.x


def params_from_point(pt: PlanePoint, surf: SurfaceParams) -> StabilityParams:
    if not (pt.y > 0 and above_parabola(pt, surf)):
        raise BelowParabola(f"{pt} is not strictly above y = {surf.half}x^2")
    b = pt.x / pt.y
    return StabilityParams(b, Fraction(2) / (surf.h2 * pt.y) - b * b)


# --- holes -------------------------------------------------------------------

@dataclass(frozen=True)
class HoleSegment:
    """The closed segment I_delta, or the vertical ray above (0, 1) when c = 0."""

    root: MukaiVector
    start: PlanePoint
    end: Optional[PlanePoint]

    @property
    def to_infinity(self) -> bool:
        return self.end is None

    def contains(self, pt: PlanePoint) -> bool:
        if self.end is None:
            return pt.x == self.start.x and pt.y >= self.start.y
        return on_closed_segment(pt, self.start, self.end)


def hole_segment(delta: MukaiVector, surf: SurfaceParams) -> HoleSegment:
    if square(delta, surf) != -2:
        raise NotARoot(f"{delta} has square {square(delta, surf)}, not -2")
    if delta.r <= 0:
        raise NonPositiveRank(f"{delta} must have positive rank")
    start = project(delta)
    if delta.c == 0:
        return HoleSegment(delta, start, None)
    end = PlanePoint(Fraction(2 * delta.r, surf.h2 * delta.c),
                     Fraction(2 * delta.r * delta.r, surf.h2 * delta.c * delta.c))
    return HoleSegment(delta, start, end)


def hole_parameter(delta: MukaiVector) -> Fraction:
    """Scale t with p_delta = t * pr(delta); equals rs/(rs - 1)."""
    rs = delta.r * delta.s
    return Fraction(rs, rs - 1)


def holes_through(pt: PlanePoint, surf: SurfaceParams) -> List[MukaiVector]:
    """Roots of positive rank whose closed hole contains a point above the parabola."""
    if pt.y <= 0 or not above_parabola(pt, surf):
        return []
    ratio = pt.x / pt.y
    c0, r0 = ratio.numerator, ratio.denominator
    # pt = t pr(delta) with (c, r) = k (c0, r0) and t >= 1 forces
    # k^2 (2 r0^2 - y c0^2 H^2) <= 2y
    slack = 2 * r0 * r0 - pt.y * c0 * c0 * surf.h2
    kmax = isqrt(int(2 * pt.y / slack)) + 1
    found = []
    for k in range(1, kmax + 1):
        r, c = k * r0, k * c0
        num = c * c * surf.h2 + 2
        if num % (2 * r):
            continue
        delta = MukaiVector(r, c, num // (2 * r))
        if hole_segment(delta, surf).contains(pt):
            found.append(delta)
    return found


def is_valid_stability_point(pt: PlanePoint, surf: SurfaceParams) -> bool:
    return above_parabola(pt, surf) and not holes_through(pt, surf)


# --- regions -----------------------------------------------------------------

@dataclass(frozen=True)
class HalfPlane:
    """a*x + b*y < c (strict) or <= c."""

    a: Fraction
    b: Fraction
    c: Fraction
    strict: bool = True

    def holds(self, pt: PlanePoint) -> bool:
        lhs = self.a * pt.x + self.b * pt.y
        return lhs < self.c if self.strict else lhs <= self.c


def _hp(a: Rational, b: Rational, c: Rational, strict: bool = True) -> HalfPlane:
    return HalfPlane(Fraction(a), Fraction(b), Fraction(c), strict)


@dataclass(frozen=True)
class Region:
    """A finite union of convex pieces, each an intersection of half-planes."""

    label: str
    pieces: Tuple[Tuple[HalfPlane, ...], ...]
    corners: Tuple[PlanePoint, ...] = field(default=())

    def contains(self, pt: PlanePoint) -> bool:
        return any(all(h.holds(pt) for h in piece) for piece in self.pieces)


def whole_plane() -> Region:
    return Region("plane", ((),))


def empty_region() -> Region:
    return Region("empty", ())


def rectangle(x0: Rational, y0: Rational, x1: Rational, y1: Rational, closed: bool = True) -> Region:
    x0, x1 = sorted((Fraction(x0), Fraction(x1)))
    y0, y1 = sorted((Fraction(y0), Fraction(y1)))
    strict = not closed
    piece = (_hp(-1, 0, -x0, strict), _hp(1, 0, x1, strict),
             _hp(0, -1, -y0, strict), _hp(0, 1, y1, strict))
    corners = (PlanePoint(x0, y0), PlanePoint(x1, y0), PlanePoint(x1, y1), PlanePoint(x0, y1))
    return Region("rectangle", (piece,), corners)


def _side(p: PlanePoint, q: PlanePoint, inside: PlanePoint, strict: bool) -> HalfPlane:
    # half-plane bounded by line pq that contains `inside`
    a, b = q.y - p.y, p.x - q.x
    c = a * p.x + b * p.y
    if a * inside.x + b * inside.y > c:
        a, b, c = -a, -b, -c
    return HalfPlane(a, b, c, strict)


def triangle(p: PlanePoint, q: PlanePoint, t: PlanePoint, closed: bool = False) -> Region:
    if (q.x - p.x) * (t.y - p.y) - (q.y - p.y) * (t.x - p.x) == 0:
        raise StabilityPlaneError("degenerate triangle")
    centroid = PlanePoint((p.x + q.x + t.x) / 3, (p.y + q.y + t.y) / 3)
    strict = not closed
    piece = (_side(p, q, centroid, strict), _side(q, t, centroid, strict), _side(t, p, centroid, strict))
    return Region("triangle", (piece,), (p, q, t))


def cone(apex: PlanePoint, d1: Tuple[Rational, Rational], d2: Tuple[Rational, Rational]) -> Region:
    """Open cone at `apex` between two rays (angle below pi)."""
    p1 = PlanePoint(apex.x + d1[0], apex.y + d1[1])
    p2 = PlanePoint(apex.x + d2[0], apex.y + d2[1])
    inside = PlanePoint((p1.x + p2.x) / 2, (p1.y + p2.y) / 2)
    piece = (_side(apex, p1, inside, True), _side(apex, p2, inside, True))
    return Region("cone", (piece,), (apex, p1, p2))


def halfplanes(constraints: Sequence[HalfPlane], label: str = "halfplanes") -> Region:
    return Region(label, (tuple(constraints),))


# --- half-integers -------------------------------------------------------------

def doubled(value: Rational) -> int:
    """2*value for a positive half-integer, rejecting anything else."""
    v = Fraction(value)
    two = 2 * v
    if two.denominator != 1 or two <= 0:
        raise StabilityPlaneError(f"{value} is not a positive half-integer")
    return int(two)


def gamma(n: Rational, surf: SurfaceParams) -> PlanePoint:
    """The parabola point (1/n, H^2/(2 n^2)); n may be negative."""
    n = Fraction(n)
    return PlanePoint(1 / n, Fraction(surf.h2, 2) / (n * n))


def make_U_region(n: Rational, surf: SurfaceParams) -> Region:
    """{0 < |x| < 1/n and (H^2/2n)|x| < |y|} as four open convex pieces."""
    n = Fraction(doubled(n), 2)
    k = Fraction(surf.h2, 2) / n
    inv = 1 / n
    pieces = []
    for sx in (1, -1):
        for sy in (1, -1):
            pieces.append((
                _hp(-sx, 0, 0),          # sx * x > 0
                _hp(sx, 0, inv),         # |x| < 1/n
                _hp(k * sx, -sy, 0),     # k|x| < |y|
            ))
    return Region(f"U_{n}", tuple(pieces))


# --- no-root certificates -------------------------------------------------------

DEFAULT_BRUTE_BOUND = 50


def roots_in_region(surf: SurfaceParams, region: Region, bound: int = DEFAULT_BRUTE_BOUND) -> List[MukaiVector]:
    return enumerate_roots_in_box(surf, bound, bound, bound, region)


@register_check("no_roots_in_U_by_argument")
def _check_u_argument(a: Dict[str, Any]) -> bool:
    """Replay of the case analysis; only the hypotheses depend on the input."""
    twice_n, h2 = int(a["twice_n"]), int(a["h2"])
    if twice_n <= 0 or twice_n > h2:
        return False
    # |n c| lies in the open interval (|s| - 1/|r|, |s|). Its length 1/|r| must
    # exceed the spacing 1/2 of (1/2)Z when n is a half-integer, else 1.
    spacing = Fraction(1, 2) if twice_n % 2 else Fraction(1)
    admissible = [rr for rr in (1, 2, 3) if Fraction(1, rr) > spacing]
    if twice_n % 2 == 0:
        return admissible == []
    # only |r| = 1 remains, and then |c| < 2n / H^2 <= 1 forces c = 0
    return admissible == [1] and Fraction(twice_n, h2) <= 1


@register_check("no_roots_in_U_by_scan")
def _check_u_scan(a: Dict[str, Any]) -> bool:
    surf = SurfaceParams(int(a["h2"]))
    region = make_U_region(Fraction(int(a["twice_n"]), 2), surf)
    return roots_in_region(surf, region, int(a["bound"])) == []


@dataclass
class UCertificate:
    n: Fraction
    h2: int
    branch: str
    certificate: Certificate
    counterexamples: List[MukaiVector]

    @property
    def holds(self) -> bool:
        return self.certificate.holds and not self.counterexamples

    def to_json(self) -> Dict[str, Any]:
        out = self.certificate.to_json()
        out["branch"] = self.branch
        out["counterexamples"] = [[v.r, v.c, v.s] for v in self.counterexamples]
        return out


def certify_no_roots_U(n: Rational, surf: SurfaceParams, brute_bound: int = DEFAULT_BRUTE_BOUND,
                       cross_check: bool = False) -> UCertificate:
    """Certify that no root projects into U_n.

    For 2n <= H^2 the finite argument is replayed; beyond that a bounded scan is
    the only evidence and may return counterexamples.
    """
    twice_n = doubled(n)
    n = Fraction(twice_n, 2)
    cert = Certificate("no_roots_in_U", data={"n": n, "h2": surf.h2})
    counter: List[MukaiVector] = []
    if twice_n <= surf.h2:
        branch = "integer" if twice_n % 2 == 0 else "half-integer"
        cert.add("no_roots_in_U_by_argument", note=f"{branch} branch, 2n <= H^2",
                 twice_n=twice_n, h2=surf.h2)
        if cross_check:
            cert.add("no_roots_in_U_by_scan", twice_n=twice_n, h2=surf.h2, bound=brute_bound)
    else:
        branch = "brute-force"
        counter = roots_in_region(surf, make_U_region(n, surf), brute_bound)
        cert.add("no_roots_in_U_by_scan", note="2n > H^2, bounded scan only",
                 twice_n=twice_n, h2=surf.h2, bound=brute_bound)
    cert.data["branch"] = branch
    return UCertificate(n, surf.h2, branch, cert, counter)


@register_check("region_cover_abscissa")
def _check_cover(a: Dict[str, Any]) -> bool:
    m, n, k = Fraction(a["m"]), Fraction(a["n"]), Fraction(a["k"])
    x_k = (1 / (m * n)) / (1 / m + 1 / n - 1 / k)
    return x_k < 1 / (k + Fraction(1, 2))


def cover_abscissa(m: Fraction, n: Fraction, k: Fraction) -> Fraction:
    """x-coordinate where the chord gamma_m gamma_n meets the ray through gamma_k."""
    return (1 / (m * n)) / (1 / m + 1 / n - 1 / k)


@dataclass
class RegionCoverCertificate:
    m: Fraction
    n: Fraction
    eps: Fraction
    h2: int
    certificate: Certificate
    u_certificates: List[UCertificate]
    points: Dict[str, PlanePoint]

    @property
    def holds(self) -> bool:
        return self.certificate.holds and all(u.holds for u in self.u_certificates)

    def to_json(self) -> Dict[str, Any]:
        from .certificates import encode

        out = self.certificate.to_json()
        out["points"] = encode(self.points)
        out["u_certificates"] = [u.to_json() for u in self.u_certificates]
        return out


def chord(m: Rational, n: Rational, surf: SurfaceParams) -> Line:
    return Line.through(gamma(m, surf), gamma(n, surf))


def lemma27_points(m: Fraction, n: Fraction, eps: Fraction, surf: SurfaceParams) -> Dict[str, PlanePoint]:
    pts: Dict[str, PlanePoint] = {}
    for sign, suffix in ((1, ""), (-1, "_mirror")):
        gm, gn = gamma(sign * m, surf), gamma(sign * n, surf)
        line = Line.through(gm, gn)
        q = line.intersect(Line.through(ORIGIN, gamma(sign * (n - eps), surf)))
        x_qp = sign / (m + eps)
        q_prime = PlanePoint(x_qp, line.y_at(x_qp))
        pts["gamma_m" + suffix] = gm
        pts["gamma_n" + suffix] = gn
        pts["q" + suffix] = q
        pts["q_prime" + suffix] = q_prime
    return pts


def certify_region_lemma27(m: Rational, n: Rational, eps: Rational, surf: SurfaceParams) -> RegionCoverCertificate:
    """Cover the region cut out by gamma_m, gamma_n and eps with U_k pieces."""
    m2, n2, e2 = doubled(m), doubled(n), doubled(eps)
    m, n, eps = Fraction(m2, 2), Fraction(n2, 2), Fraction(e2, 2)
    half = Fraction(1, 2)
    failures = []
    if not m < n:
        failures.append(f"m < n fails: m = {m}, n = {n}")
    if not eps + half < n:
        failures.append(f"eps + 1/2 < n fails: {eps + half} >= {n}")
    if not n <= Fraction(surf.h2, 2):
        failures.append(f"n <= H^2/2 fails: {n} > {Fraction(surf.h2, 2)}")
    bound = 2 * eps / (2 * eps + 1) * n - eps
    if not m < bound:
        failures.append(f"m < (2eps/(2eps+1)) n - eps fails: {m} >= {bound}")
    if failures:
        raise PreconditionViolation(failures)

    cert = Certificate("region_cover", data={"m": m, "n": n, "eps": eps, "h2": surf.h2})
    cert.add("rational_lt", note="eps + 1/2 < n", left=eps + half, right=n)
    cert.add("rational_le", note="n <= H^2/2", left=n, right=Fraction(surf.h2, 2))
    cert.add("rational_lt", note="m < (2eps/(2eps+1)) n - eps", left=m, right=bound)
    k = m + eps
    while k <= n - eps - half:
        cert.add("region_cover_abscissa", note=f"x_k < 1/(k+1/2) at k = {k}", m=m, n=n, k=k)
        k += half
    ucerts = []
    j = m + eps
    while j <= n:
        ucerts.append(certify_no_roots_U(j, surf))
        j += half
    return RegionCoverCertificate(m, n, eps, surf.h2, cert, ucerts, lemma27_points(m, n, eps, surf))
