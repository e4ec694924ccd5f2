"""The two families of polarised K3 surfaces and their end-to-end verifiers.

Family A has H^2 = 2rs with 2 <= r <= s, s >= 5 and vbar = (r, 1, s).
Family B has H^2 = 2p with p odd, p >= 13 and vbar = (4, 2, p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .brill_noether import (FloorCertificate, HNPolygon, PolygonError, bn_norm, compare_radicals,
                            h0_bound_polygon, radical_check, zbar)
from .certificates import Certificate, register_check
from .geometry import Line, PlanePoint, Rational
from .lattice import MukaiVector, SurfaceParams, pairing, project, square
from .radicals import MAX_BITS, ComparisonCertificate, RadicalValue
from .stability_plane import RegionCoverCertificate, certify_region_lemma27
from .walls import (SlopeWindow, Wall, first_wall_candidates, gieseker_first_wall, wall_line)


class CaseError(ValueError):
    pass


class WallMismatch(CaseError):
    pass


class CertificateFailure(CaseError):
    pass


# --- parameters ---------------------------------------------------------------

@dataclass(frozen=True)
class CaseAParams:
    r: int
    s: int

    def __post_init__(self) -> None:
        if not isinstance(self.r, int) or not isinstance(self.s, int):
            raise CaseError("r and s must be integers")
        if self.r < 2:
            raise CaseError(f"need r >= 2, got r = {self.r}")
        if self.s < max(self.r, 5):
            raise CaseError(f"need s >= max(r, 5) = {max(self.r, 5)}, got s = {self.s}")
        assert square(self.vbar, self.surface) == 0

    label = "A"

    @property
    def genus(self) -> int:
        return self.r * self.s + 1

    @property
    def h2(self) -> int:
        return 2 * self.r * self.s

    @property
    def surface(self) -> SurfaceParams:
        return SurfaceParams(self.h2)

    @property
    def v(self) -> MukaiVector:
        return MukaiVector(0, self.r, 2 * self.r * self.s - self.r * self.r * self.s)

    @property
    def vbar(self) -> MukaiVector:
        return MukaiVector(self.r, 1, self.s)

    @property
    def w_e(self) -> MukaiVector:
        return MukaiVector(-self.s, 1, -self.r)

    @property
    def region_params(self) -> Tuple[Fraction, Fraction, Fraction]:
        return Fraction(self.r), Fraction(self.s * (self.r - 1)), Fraction(1)

    def params(self) -> Dict[str, int]:
        return {"r": self.r, "s": self.s}


@dataclass(frozen=True)
class CaseBParams:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int):
            raise CaseError("p must be an integer")
        if self.p % 2 == 0:
            raise CaseError(f"need p odd, got p = {self.p}")
        if self.p < 13:
            raise CaseError(f"need p >= 13, got p = {self.p}")
        assert square(self.vbar, self.surface) == 0

    label = "B"

    @property
    def genus(self) -> int:
        return self.p + 1

    @property
    def h2(self) -> int:
        return 2 * self.p

    @property
    def surface(self) -> SurfaceParams:
        return SurfaceParams(self.h2)

    @property
    def v(self) -> MukaiVector:
        return MukaiVector(0, 4, 0)

    @property
    def vbar(self) -> MukaiVector:
        return MukaiVector(4, 2, self.p)

    @property
    def w_e(self) -> MukaiVector:
        return MukaiVector(-self.p, 2, -4)

    @property
    def region_params(self) -> Tuple[Fraction, Fraction, Fraction]:
        return Fraction(2), Fraction(self.p, 2), Fraction(1, 2)

    def params(self) -> Dict[str, int]:
        return {"p": self.p}


Case = Union[CaseAParams, CaseBParams]


def build_case_a(r: int, s: int) -> CaseAParams:
    return CaseAParams(r, s)


def build_case_b(p: int) -> CaseBParams:
    return CaseBParams(p)


# --- named points ---------------------------------------------------------------

def _on_line_at_x(line: Line, x: Rational) -> PlanePoint:
    return PlanePoint(Fraction(x), line.y_at(x))


def named_points(case: Case) -> Dict[str, PlanePoint]:
    """Exact coordinates of the labelled points, keyed as '<case>.<label>'."""
    surf = case.surface
    pts: Dict[str, PlanePoint] = {"o": PlanePoint(0, 0), "o_prime": PlanePoint(0, 1)}
    m, n, eps = case.region_params
    from .stability_plane import lemma27_points

    region = lemma27_points(m, n, eps, surf)
    pts["e"] = region["q_mirror"]
    pts["t"] = region["q_prime_mirror"]
    for key in ("gamma_m", "gamma_n", "gamma_m_mirror", "gamma_n_mirror"):
        pts[key] = region[key]
    pts["q"] = project(case.vbar)
    if isinstance(case, CaseAParams):
        r, s = case.r, case.s
        pts["p"] = project(case.v - case.vbar)
        pts["q_prime"] = project(case.w_e)
        pq = Line.through(pts["p"], pts["q"])
        pts["o_tilde"] = _on_line_at_x(pq, 0)
        qp = Line.through(pts["q_prime"], pts["p"])
        b3 = Fraction(-(r - 2), r - 1) if r > 2 else Fraction(-1, 3)
        pts["e_prime"] = qp.intersect(Line.from_rational(1, -b3, 0))
        pts["t_prime"] = qp.intersect(Line.from_rational(s - 1, 1, 0))
    else:
        pts["s"] = project(case.v - case.vbar)
        pts["s_prime"] = project(case.w_e)
        pts["o_tilde"] = PlanePoint(0, Fraction(4, case.p))
        sq = Line.through(pts["s_prime"], pts["q"])
        pts["t_prime"] = _on_line_at_x(sq, Fraction(-2, 5))
    return {f"{case.label}.{k}": v for k, v in sorted(pts.items())}


# --- region certificates -----------------------------------------------------------

def certify_case_regions(case: Case) -> RegionCoverCertificate:
    m, n, eps = case.region_params
    cert = certify_region_lemma27(m, n, eps, case.surface)
    if not cert.holds:
        raise CertificateFailure(f"region certificate failed for case {case.label} {case.params()}")
    return cert


# --- roots at a single point ---------------------------------------------------------

@dataclass(frozen=True)
class RootExclusion:
    point: PlanePoint
    h2: int
    root: Optional[MukaiVector]
    reason: str

    @property
    def excluded(self) -> bool:
        return self.root is None

    def to_json(self) -> Dict[str, Any]:
        from .certificates import encode

        return {"point": encode(self.point), "h2": self.h2, "root": encode(self.root),
                "reason": self.reason}


def exclude_root_at_point(pt: PlanePoint, surf: SurfaceParams) -> RootExclusion:
    """Decide whether some root projects exactly to `pt`.

    With (c, r) = s (x, y) the root equation becomes s^2 (2y - H^2 x^2) = 2, so
    s^2 is forced, and s must also clear the denominators of x and y.
    """
    x, y = pt.x, pt.y
    denom = 2 * y - surf.h2 * x * x
    if denom <= 0:
        return RootExclusion(pt, surf.h2, None, f"2y - H^2 x^2 = {denom} <= 0, so s^2 cannot be positive")
    forced = 2 / denom
    if forced.denominator != 1:
        return RootExclusion(pt, surf.h2, None, f"s^2 = {forced} is not an integer")
    sq = forced.numerator
    root_s = isqrt(sq)
    if root_s * root_s != sq:
        return RootExclusion(pt, surf.h2, None, f"s^2 = {sq} is not a perfect square")
    if (root_s * x).denominator != 1 or (root_s * y).denominator != 1:
        return RootExclusion(pt, surf.h2, None,
                             f"s = {root_s} is not divisible by the denominators of {pt}")
    delta = MukaiVector(int(root_s * y), int(root_s * x), root_s)
    assert square(delta, surf) == -2 and project(delta) == pt
    return RootExclusion(pt, surf.h2, delta, f"s^2 = {sq}")


@register_check("no_root_at_point")
def _check_no_root(a: Dict[str, Any]) -> bool:
    return exclude_root_at_point(a["point"], SurfaceParams(int(a["h2"]))).excluded


def case_a_t_point(s: int) -> PlanePoint:
    return PlanePoint(Fraction(-1, 3), Fraction(s - 1, 3))


def case_b_t_point(p: int) -> PlanePoint:
    return PlanePoint(Fraction(-2, 5), Fraction(p - 1, 5))


# --- gap certificates -----------------------------------------------------------------

@dataclass
class GapCertificate:
    case_id: str
    params: Dict[str, int]
    length: RadicalValue
    inner_length: RadicalValue
    eps: RadicalValue
    verdict: bool
    comparison: ComparisonCertificate
    certificate: Certificate
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def difference(self) -> RadicalValue:
        return self.length - self.inner_length

    @property
    def holds(self) -> bool:
        return self.verdict and self.certificate.holds

    def to_json(self) -> Dict[str, Any]:
        from .certificates import encode

        out = self.certificate.to_json()
        out.update({
            "case": self.case_id,
            "params": self.params,
            "l": self.length.to_json(),
            "l_in": self.inner_length.to_json(),
            "eps": self.eps.to_json(),
            "verdict": self.verdict,
            "comparison": self.comparison.to_json(),
            "extras": encode(self.extras),
        })
        return out


def chain_length(vertices: Sequence[Tuple[Rational, Rational]], surf: SurfaceParams) -> RadicalValue:
    total = RadicalValue(Fraction(0))
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        total = total + bn_norm(Fraction(x1) - Fraction(x0), Fraction(y1) - Fraction(y0), surf)
    return total


def _dedupe(vertices: Sequence[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    out: List[Tuple[Fraction, Fraction]] = []
    for v in vertices:
        if not out or out[-1] != v:
            out.append(v)
    return out


def triangle_a(r: int, s: int) -> List[Tuple[Fraction, Fraction]]:
    return [(Fraction(0), Fraction(0)), (Fraction(r - s), Fraction(1)),
            (Fraction(r * r * s - 2 * r * s), Fraction(r))]


def inner_polygon_a(r: int, s: int) -> List[Tuple[Fraction, Fraction]]:
    # for r = 2 the second inner vertex coincides with g2
    g1p = (Fraction(r - s + 1), Fraction(1))
    g2p = (Fraction(s * (r - 2) + r) - Fraction(r, r - 1), Fraction(2))
    g2 = triangle_a(r, s)[2]
    return _dedupe([(Fraction(0), Fraction(0)), g1p, g2p, g2])


def triangle_b(p: int) -> List[Tuple[Fraction, Fraction]]:
    return [(Fraction(0), Fraction(0)), (Fraction(4 - p), Fraction(2)), (Fraction(0), Fraction(4))]


def inner_polygon_b(p: int) -> List[Tuple[Fraction, Fraction]]:
    half_p = Fraction(p, 2)
    return [(Fraction(0), Fraction(0)), (2 - half_p, Fraction(1)), (Fraction(5 - p), Fraction(2)),
            (2 - half_p, Fraction(3)), (Fraction(0), Fraction(4))]


def f1_value(r: int, s: int) -> Fraction:
    top = s * r * (r - 1) ** 2
    return (top - Fraction(3, 2) * r + Fraction(1, 2)) / (top + r)


def f2_value(r: int, s: int) -> RadicalValue:
    return (Fraction(s - r) - Fraction(1, 2)) / RadicalValue.sqrt(4 * r * s + 4 + (r - s) ** 2)


def gap_values_a(r: int, s: int) -> Dict[str, Any]:
    """l, l_in and eps for family A without any parameter gate."""
    surf = SurfaceParams(2 * r * s)
    length = chain_length(triangle_a(r, s), surf)
    inner = chain_length(inner_polygon_a(r, s), surf)
    eps = Fraction(2 * r * s - r * r * s, 2) + length * Fraction(1, 2) - (r + s)
    return {"l": length, "l_in": inner, "eps": eps, "f1": f1_value(r, s), "f2": f2_value(r, s)}


def gap_values_b(p: int) -> Dict[str, Any]:
    """l, l_in and eps for family B without any parameter gate (used for controls)."""
    surf = SurfaceParams(2 * p)
    length = chain_length(triangle_b(p), surf)
    inner = chain_length(inner_polygon_b(p), surf)
    eps = length * Fraction(1, 2) - (p + 4)
    return {"l": length, "l_in": inner, "eps": eps}


def _polygon_check(cert: Certificate, name: str, vertices: Sequence[Tuple[Fraction, Fraction]]) -> None:
    cert.add("convex_chain", note=f"{name} is a convex chain", vertices=[list(v) for v in vertices])


@register_check("convex_chain")
def _check_convex(a: Dict[str, Any]) -> bool:
    try:
        HNPolygon.from_points([tuple(v) for v in a["vertices"]])
    except PolygonError:
        return False
    return True


def gap_certificate_a(case: CaseAParams, max_bits: int = MAX_BITS) -> GapCertificate:
    r, s = case.r, case.s
    vals = gap_values_a(r, s)
    length, inner, eps = vals["l"], vals["l_in"], vals["eps"]
    f_sum = vals["f2"] + vals["f1"]
    cert = Certificate("gap_case_a", data={"r": r, "s": s})
    _polygon_check(cert, "triangle T", triangle_a(r, s))
    _polygon_check(cert, "inner polygon", inner_polygon_a(r, s))
    cert.add("radical_compare", note="f1 + f2 >= 69/100", left=f_sum, right=Fraction(69, 100), relation="ge")
    cert.add("radical_compare", note="2 eps <= 686/1000", left=eps * 2, right=Fraction(686, 1000), relation="le")
    cert.add("radical_compare", note="l - l_in > 2 eps", left=length - inner, right=eps * 2, relation="gt")
    comparison = compare_radicals(length - inner, eps * 2, max_bits)
    verdict = comparison.ordering > 0
    # l - l_in >= f1 + f2 is kept as a recorded diagnostic only
    link = compare_radicals(length - inner, f_sum, max_bits).ordering >= 0
    extras = {"f1": vals["f1"], "f2": vals["f2"], "link_l_minus_l_in_ge_f_sum": link}
    return GapCertificate("A", case.params(), length, inner, eps, verdict, comparison, cert, extras)


def gap_certificate_b(case: CaseBParams, max_bits: int = MAX_BITS) -> GapCertificate:
    p = case.p
    vals = gap_values_b(p)
    length, inner, eps = vals["l"], vals["l_in"], vals["eps"]
    cert = Certificate("gap_case_b", data={"p": p})
    _polygon_check(cert, "triangle T", triangle_b(p))
    _polygon_check(cert, "inner polygon", inner_polygon_b(p))
    cert.add("radical_compare", note="l - l_in > 2 eps", left=length - inner, right=eps * 2, relation="gt")
    comparison = compare_radicals(length - inner, eps * 2, max_bits)
    return GapCertificate("B", case.params(), length, inner, eps, comparison.ordering > 0, comparison, cert)


# --- first wall ----------------------------------------------------------------------

@dataclass
class FirstWallCertificate:
    wall: Wall
    below: List[MukaiVector]
    certificate: Certificate

    @property
    def holds(self) -> bool:
        return self.certificate.holds and not self.below

    def to_json(self) -> Dict[str, Any]:
        from .certificates import encode

        out = self.certificate.to_json()
        out["wall"] = self.wall.to_json()
        out["below"] = encode(self.below)
        return out


def case_window(case: Case) -> SlopeWindow:
    """Slope bounds read off the ends of the expected wall: [mu(vbar) - 1, mu(vbar)]."""
    mu = Fraction(case.vbar.c, case.vbar.r)
    return SlopeWindow(mu - 1, mu)


def candidates_on_or_below(case: Case, bounds: Optional[int] = None) -> List[MukaiVector]:
    """Classes whose wall meets x = 0 no higher than the vbar wall, under the fixed window."""
    surf = case.surface
    y_wall = wall_line(case.v, case.vbar, surf).y_at(0)
    window = case_window(case)
    out = []
    for v1, y0 in first_wall_candidates(case.v, surf, bounds, window=window):
        if y0 <= y_wall:
            out.append(v1)
    return out


@register_check("only_vbar_on_or_below")
def _check_only_vbar(a: Dict[str, Any]) -> bool:
    case = _case_from_args(a)
    return candidates_on_or_below(case, int(a["bounds"])) == [case.vbar]


def _case_from_args(a: Dict[str, Any]) -> Case:
    if "p" in a:
        return CaseBParams(int(a["p"]))
    return CaseAParams(int(a["r"]), int(a["s"]))


def verify_first_wall(case: Case, bounds: Optional[int] = None) -> FirstWallCertificate:
    surf = case.surface
    result = gieseker_first_wall(case.v, surf, bounds)
    wall = result.wall
    pts = named_points(case)
    q = pts[f"{case.label}.q"]
    other = pts[f"{case.label}.p"] if isinstance(case, CaseAParams) else pts[f"{case.label}.s"]
    if wall.witness[0] != case.vbar:
        raise WallMismatch(f"first wall witness is {wall.witness[0]}, expected {case.vbar}")
    if not (wall.line.contains(q) and wall.line.contains(other)):
        raise WallMismatch(f"first wall {wall.line} misses {q} or {other}")
    seg = wall.segment
    if seg is None or set(seg) != {q, other}:
        raise WallMismatch(f"first wall segment {seg} is not the expected chord")
    height = wall.probe_point.y
    below = [v1 for v1, y in result.candidates if y < height]
    cert = Certificate("first_wall", data={"case": case.label, **case.params()})
    cert.add("first_wall", note="search at b = 0 returns the vbar wall", v=case.v, h2=case.h2,
             bounds=result.bounds, line=wall.line, witness=case.vbar)
    cert.add("only_vbar_on_or_below", note="fixed-window replay: vbar is the only class on or below",
             bounds=result.bounds, **case.params())
    cert.add("same_phase_at", note="v and vbar share a phase on the wall",
             v=case.v, v1=case.vbar, h2=case.h2, point=wall.probe_point)
    return FirstWallCertificate(wall, below, cert)


# --- h0 ceiling -----------------------------------------------------------------------

def h0_ceiling(case: Case) -> Tuple[int, FloorCertificate]:
    if isinstance(case, CaseAParams):
        poly = HNPolygon.from_points(triangle_a(case.r, case.s))
    else:
        poly = HNPolygon.from_points(triangle_b(case.p))
    cert = h0_bound_polygon(case.v, poly, case.surface)
    return cert.floor, cert


__all__ = [
    "Case", "CaseAParams", "CaseBParams", "CaseError", "CertificateFailure", "FirstWallCertificate",
    "GapCertificate", "RootExclusion", "WallMismatch", "build_case_a", "build_case_b",
    "candidates_on_or_below", "case_a_t_point", "case_b_t_point", "case_window", "certify_case_regions",
    "chain_length", "exclude_root_at_point", "f1_value", "f2_value", "gap_certificate_a",
    "gap_certificate_b", "gap_values_a", "gap_values_b", "h0_ceiling", "inner_polygon_a",
    "inner_polygon_b", "named_points", "radical_check", "triangle_a", "triangle_b", "verify_first_wall",
]
