"""Figures of the projection plane and of charge polygons, written as deterministic SVG."""

from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .certificates import encode  # noqa: E402
from .geometry import PlanePoint  # noqa: E402
from .lattice import SurfaceParams, enumerate_roots_in_box  # noqa: E402
from .stability_plane import Region, hole_segment, make_U_region, rectangle  # noqa: E402

Viewport = Tuple[Fraction, Fraction, Fraction, Fraction]

RC = {
    "svg.hashsalt": "mukai-walls",
    "svg.fonttype": "none",
    "path.simplify": False,
    "font.size": 8.0,
}
DPI = 72
SIZE_IN = (6.0, 5.0)
PRECISION = 6


def _r(value: Any) -> float:
    return round(float(value), PRECISION)


class Figure:
    """Collects exact geometry, draws it with matplotlib and records a manifest."""

    def __init__(self, name: str, viewport: Viewport, xlabel: str, ylabel: str):
        self.name = name
        self.viewport = tuple(Fraction(v) for v in viewport)
        self.elements: List[Dict[str, Any]] = []
        with plt.rc_context(RC):
            self.fig, self.ax = plt.subplots(figsize=SIZE_IN, dpi=DPI)
        x0, y0, x1, y1 = self.viewport
        self.ax.set_xlim(float(x0), float(x1))
        self.ax.set_ylim(float(y0), float(y1))
        self.ax.set_xlabel(xlabel)
        self.ax.set_ylabel(ylabel)
        self.ax.axhline(0, color="0.6", lw=0.5, gid="axis-x")
        self.ax.axvline(0, color="0.6", lw=0.5, gid="axis-y")

    def _record(self, gid: str, kind: str, **data: Any) -> None:
        self.elements.append({"gid": gid, "kind": kind, **encode(data)})

    def curve(self, gid: str, xs: Sequence[float], ys: Sequence[float], exact: Dict[str, Any], **style: Any) -> None:
        self.ax.plot([_r(x) for x in xs], [_r(y) for y in ys], gid=gid, **style)
        self._record(gid, "path", **exact)

    def segment(self, gid: str, a: PlanePoint, b: Optional[PlanePoint], kind: str = "segment", **style: Any) -> None:
        if b is None:
            # ray to the top of the viewport
            end = (_r(a.x), float(self.viewport[3]))
            self.ax.plot([_r(a.x), end[0]], [_r(a.y), end[1]], gid=gid, **style)
            self._record(gid, "ray", start=a)
            return
        self.ax.plot([_r(a.x), _r(b.x)], [_r(a.y), _r(b.y)], gid=gid, **style)
        self._record(gid, kind, start=a, end=b)

    def polygon(self, gid: str, points: Sequence[PlanePoint], fill: bool = True, **style: Any) -> None:
        patch = Polygon([(_r(p.x), _r(p.y)) for p in points], closed=fill, fill=fill, gid=gid, **style)
        self.ax.add_patch(patch)
        self._record(gid, "polygon", vertices=list(points))

    def point(self, gid: str, label: str, pt: PlanePoint) -> None:
        self.ax.plot([_r(pt.x)], [_r(pt.y)], marker="o", ms=3, color="black", gid=gid)
        self.ax.annotate(label, (_r(pt.x), _r(pt.y)), xytext=(3, 3), textcoords="offset points",
                         gid=gid + "-label")
        self._record(gid, "point", label=label, at=pt)

    def transform(self) -> List[float]:
        """Affine map (a, b, c, d, e, f) taking data (x, y) to SVG user units."""
        self.fig.canvas.draw()
        m = self.ax.transData.get_matrix()
        height = self.fig.get_figheight() * DPI
        # display y grows upwards; SVG user space grows downwards
        return [round(float(v), 6) for v in (m[0, 0], m[0, 1], m[1, 0], -m[1, 1], m[0, 2], height - m[1, 2])]

    def manifest(self) -> Dict[str, Any]:
        return {
            "figure": self.name,
            "viewport": encode(list(self.viewport)),
            "transform": self.transform(),
            "elements": self.elements,
        }

    def to_svg(self) -> Tuple[bytes, Dict[str, Any]]:
        manifest = self.manifest()
        buf = io.BytesIO()
        with plt.rc_context(RC):
            self.fig.savefig(buf, format="svg", dpi=DPI, metadata={
                "Date": None,
                "Creator": "mukai-walls",
                "Title": self.name,
                "Description": json.dumps(manifest, sort_keys=True),
            })
        plt.close(self.fig)
        return buf.getvalue(), manifest


def _parabola(fig: Figure, surf: SurfaceParams) -> None:
    x0, _, x1, _ = fig.viewport
    steps = 400
    xs = [float(x0) + (float(x1) - float(x0)) * i / steps for i in range(steps + 1)]
    ys = [surf.half * x * x for x in xs]
    fig.curve("parabola", xs, ys, {"equation": {"y_over_x2": Fraction(surf.half)}}, color="black", lw=1.0)


def _in_view(fig: Figure, pt: PlanePoint) -> bool:
    x0, y0, x1, y1 = fig.viewport
    return x0 <= pt.x <= x1 and y0 <= pt.y <= y1


def _holes(fig: Figure, surf: SurfaceParams, bound: int) -> None:
    view = rectangle(*fig.viewport)
    roots = [d for d in enumerate_roots_in_box(surf, bound, bound, bound, view) if d.r > 0]
    for i, delta in enumerate(roots):
        seg = hole_segment(delta, surf)
        fig.segment(f"hole-{i}", seg.start, seg.end, kind="hole", color="tab:red", lw=1.5)
        fig.elements[-1]["root"] = encode(delta)


def _u_region(fig: Figure, n: Fraction, surf: SurfaceParams, gid: str) -> None:
    top = fig.viewport[3]
    for sign, side in ((1, "right"), (-1, "left")):
        corner = PlanePoint(sign / n, surf.h2 / (2 * n * n))
        pts = [PlanePoint(0, 0), corner, PlanePoint(sign / n, max(top, corner.y)), PlanePoint(0, max(top, corner.y))]
        fig.polygon(f"{gid}-{side}", pts, fill=True, color="0.85", lw=0, zorder=0)


def default_viewport(surf: SurfaceParams, points: Sequence[PlanePoint] = ()) -> Viewport:
    if not points:
        return (Fraction(-1), Fraction(0), Fraction(1), Fraction(2))
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    span_x = max(max(xs) - min(xs), Fraction(1, 10))
    span_y = max(max(ys) - min(ys), Fraction(1, 10))
    return (min(xs) - span_x / 10, Fraction(0), max(xs) + span_x / 10, max(ys) + span_y / 10)


def plane_figure(name: str, surf: SurfaceParams, points: Dict[str, PlanePoint],
                 viewport: Optional[Viewport] = None, hole_bound: int = 6) -> Figure:
    view = viewport or default_viewport(surf, list(points.values()))
    fig = Figure(name, view, "x", "y")
    _parabola(fig, surf)
    _holes(fig, surf, hole_bound)
    return fig


def regions_figure(surf: SurfaceParams, u_indices: Sequence[Fraction], points: Dict[str, PlanePoint],
                   viewport: Optional[Viewport] = None, hole_bound: int = 6) -> Figure:
    fig = plane_figure("regions", surf, points, viewport, hole_bound)
    for i, n in enumerate(u_indices):
        _u_region(fig, Fraction(n), surf, f"region-U{i}")
        fig.elements[-1]["n"] = encode(Fraction(n))
    for label, pt in points.items():
        if _in_view(fig, pt):
            fig.point("point-" + label.replace(".", "-"), label, pt)
    return fig


def walls_figure(surf: SurfaceParams, walls: Sequence[Tuple[PlanePoint, PlanePoint]],
                 points: Dict[str, PlanePoint], viewport: Optional[Viewport] = None,
                 hole_bound: int = 6) -> Figure:
    fig = plane_figure("walls", surf, points, viewport, hole_bound)
    for i, (a, b) in enumerate(walls):
        fig.segment(f"wall-{i}", a, b, kind="wall", color="tab:blue", lw=1.5)
    for label, pt in points.items():
        if _in_view(fig, pt):
            fig.point("point-" + label.replace(".", "-"), label, pt)
    return fig


def polygon_figure(outer: Sequence[Tuple[Fraction, Fraction]], inner: Sequence[Tuple[Fraction, Fraction]],
                   labels: Dict[str, Tuple[Fraction, Fraction]]) -> Figure:
    pts = [PlanePoint(x, y) for x, y in list(outer) + list(inner)]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    pad_x = max(max(xs) - min(xs), Fraction(1)) / 10
    pad_y = max(max(ys) - min(ys), Fraction(1)) / 10
    view = (min(xs) - pad_x, min(ys) - pad_y, max(xs) + pad_x, max(ys) + pad_y)
    fig = Figure("polygon", view, "Re", "Im")
    fig.polygon("polygon-outer", [PlanePoint(x, y) for x, y in outer], fill=True, color="0.85", lw=0.8,
                ec="black", zorder=0)
    fig.polygon("polygon-inner", [PlanePoint(x, y) for x, y in inner], fill=False, color="tab:blue", lw=1.0)
    for label, (x, y) in labels.items():
        fig.point("point-" + label.replace(".", "-"), label, PlanePoint(x, y))
    return fig
