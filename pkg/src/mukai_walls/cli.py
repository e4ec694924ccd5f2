"""Command-line front end: ``mukai-walls <command> ...``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .brill_noether import h0_bound_wall
from .cases import (Case, CaseAParams, CaseBParams, CaseError, CertificateFailure, WallMismatch, build_case_a, build_case_b,
                    certify_case_regions, gap_certificate_a, gap_certificate_b, h0_ceiling,
                    inner_polygon_a, inner_polygon_b, named_points, triangle_a, triangle_b,
                    verify_first_wall)
from .certificates import Certificate, encode, recheck_certificate
from .geometry import PlanePoint
from .lattice import LatticeError, MukaiVector, SurfaceParams, enumerate_roots_in_box, project
from .radicals import UndecidedComparison
from .stability_plane import (PreconditionViolation, StabilityPlaneError, central_charge, certify_no_roots_U,
                              certify_region_lemma27, params_from_point, rectangle, same_phase, whole_plane)
from .walls import WallError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    h2: Optional[int]
    case: Optional[Case]
    bounds: Optional[int]
    precision: int
    seed: int
    out: Optional[Path]

    @property
    def surface(self) -> SurfaceParams:
        if self.case is not None:
            return self.case.surface
        if self.h2 is None:
            raise UsageError("a surface is required: pass --h2 N, --case-a R S or --case-b P")
        return SurfaceParams(self.h2)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    surf = p.add_mutually_exclusive_group()
    surf.add_argument("--h2", type=int, help="self-intersection H^2 (even, >= 2)")
    surf.add_argument("--case-a", nargs=2, type=int, metavar=("R", "S"), help="family A with H^2 = 2rs")
    surf.add_argument("--case-b", type=int, metavar="P", help="family B with H^2 = 2p")
    p.add_argument("--bounds", type=int, help="search bound for lattice enumeration")
    p.add_argument("--precision", type=int, default=1024, help="maximal interval precision in bits (>= 64)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized cross-checks")
    p.add_argument("--out", type=Path, help="output path (default: stdout for JSON)")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON (default for roots/verify)")
    fmt.add_argument("--svg", action="store_true", help="emit SVG (default for plot)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mukai-walls", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mukai-walls {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    roots = sub.add_parser("roots", help="list roots (square -2) in a box")
    _common(roots)
    roots.add_argument("--region", nargs=4, type=_fraction, metavar=("X0", "Y0", "X1", "Y1"),
                       help="keep only roots projecting into this closed rectangle")

    verify = sub.add_parser("verify", help="run a verifier and emit its certificate")
    verify.add_argument("target", choices=["lemma26", "lemma27", "case-a", "case-b", "first-wall", "h0"])
    _common(verify)
    verify.add_argument("--n", type=_fraction, help="index n (half-integer) for lemma26/lemma27")
    verify.add_argument("--m", type=_fraction, help="index m (half-integer) for lemma27")
    verify.add_argument("--eps", type=_fraction, help="eps (half-integer) for lemma27")
    verify.add_argument("--mukai", nargs=3, type=int, metavar=("R", "C", "S"), help="class for h0")
    verify.add_argument("--cross-check", action="store_true", help="add brute-force scans to lemma26")

    plot = sub.add_parser("plot", help="render a figure to SVG")
    plot.add_argument("figure", choices=["regions", "walls", "polygon"])
    _common(plot)

    recheck = sub.add_parser("recheck", help="re-evaluate a saved JSON certificate offline")
    recheck.add_argument("path", type=Path)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    if args.precision < 64:
        raise UsageError("--precision must be at least 64 bits")
    if args.bounds is not None and args.bounds < 1:
        raise UsageError("--bounds must be at least 1")
    case: Optional[Case] = None
    if args.case_a is not None:
        case = build_case_a(*args.case_a)
    elif args.case_b is not None:
        case = build_case_b(args.case_b)
    return RunConfig(args.h2, case, args.bounds, args.precision, args.seed, args.out)


def _envelope(cfg: RunConfig, command: str, params: Dict[str, Any], result: Any,
              certificates: Sequence[Dict[str, Any]], status: str) -> Dict[str, Any]:
    return {
        "tool_version": __version__,
        "surface": {"h2": cfg.surface.h2},
        "command": command,
        "params": encode(params),
        "result": encode(result),
        "certificate": list(certificates),
        "status": status,
    }


def _emit_json(doc: Dict[str, Any], out: Optional[Path]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


# --- commands ---------------------------------------------------------------------

def cmd_roots(cfg: RunConfig, region_box: Optional[Sequence[Fraction]]) -> Dict[str, Any]:
    surf = cfg.surface
    bound = cfg.bounds or 3
    region = rectangle(*region_box) if region_box else whole_plane()
    roots = enumerate_roots_in_box(surf, bound, bound, bound, region)
    rows = [{"root": d, "projection": project(d) if d.s != 0 else None} for d in roots]
    params = {"bounds": bound, "region": list(region_box) if region_box else None}
    return _envelope(cfg, "roots", params, {"count": len(rows), "roots": rows}, [], "ok")


def _random_wall_points(line: Any, seg: Any, rng: random.Random, count: int = 3) -> List[PlanePoint]:
    a, b = seg
    out = []
    for _ in range(count):
        t = Fraction(rng.randint(1, 999), 1000)
        out.append(PlanePoint(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    return out


def _first_wall_doc(case: Case, cfg: RunConfig) -> Dict[str, Any]:
    fw = verify_first_wall(case, cfg.bounds)
    rng = random.Random(cfg.seed)
    surf = case.surface
    for pt in _random_wall_points(fw.wall.line, fw.wall.segment, rng):
        fw.certificate.add("same_phase_at", note="random point of the wall segment",
                           v=case.v, v1=case.vbar, h2=surf.h2, point=pt)
    doc = fw.to_json()
    doc["holds"] = fw.holds
    return doc


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    target = args.target
    certs: List[Dict[str, Any]] = []
    result: Dict[str, Any] = {}
    params: Dict[str, Any] = {"target": target}
    if target == "lemma26":
        surf = cfg.surface
        indices = [args.n] if args.n is not None else [Fraction(k, 2) for k in range(1, surf.h2 + 1)]
        branches = {}
        for n in indices:
            kwargs = {"cross_check": args.cross_check}
            if cfg.bounds is not None:
                kwargs["brute_bound"] = cfg.bounds
            u = certify_no_roots_U(n, surf, **kwargs)
            doc = u.to_json()
            doc["holds"] = u.holds
            certs.append(doc)
            branches[str(u.n)] = u.branch
        params["n"] = indices
        result = {"branches": branches}
    elif target == "lemma27":
        if cfg.case is not None and args.m is None:
            m, n, eps = cfg.case.region_params
        else:
            if args.m is None or args.n is None or args.eps is None:
                raise UsageError("lemma27 needs --m, --n and --eps (or a case)")
            m, n, eps = args.m, args.n, args.eps
        c = certify_region_lemma27(m, n, eps, cfg.surface)
        doc = c.to_json()
        doc["holds"] = c.holds
        certs.append(doc)
        params.update({"m": m, "n": n, "eps": eps})
        result = {"points": c.points}
    elif target in ("case-a", "case-b"):
        case = cfg.case
        want = CaseAParams if target == "case-a" else CaseBParams
        if not isinstance(case, want):
            raise UsageError(f"{target} needs --{target} parameters")
        params.update(case.params())
        regions = certify_case_regions(case)
        rdoc = regions.to_json()
        rdoc["holds"] = regions.holds
        gap = (gap_certificate_a(case, cfg.precision) if isinstance(case, CaseAParams)
               else gap_certificate_b(case, cfg.precision))
        gdoc = gap.to_json()
        gdoc["holds"] = gap.holds
        ceiling, floor_cert = h0_ceiling(case)
        hcert = Certificate("h0_ceiling", data={"ceiling": ceiling})
        hcert.add("radical_floor", note="floor of the polygon bound", value=floor_cert.value, floor=ceiling)
        hdoc = hcert.to_json()
        certs = [rdoc, gdoc, _first_wall_doc(case, cfg), hdoc]
        result = {
            "genus": case.genus,
            "vbar": case.vbar,
            "v": case.v,
            "points": named_points(case),
            "l": gap.length,
            "l_in": gap.inner_length,
            "eps": gap.eps,
            "gap_verdict": gap.verdict,
            "gap_comparison": gap.comparison.to_json(),
            "h0_ceiling": ceiling,
            "extras": gap.extras,
        }
    elif target == "first-wall":
        if cfg.case is None:
            raise UsageError("first-wall needs --case-a R S or --case-b P")
        params.update(cfg.case.params())
        doc = _first_wall_doc(cfg.case, cfg)
        certs.append(doc)
        result = {"wall": doc["wall"]}
    elif target == "h0":
        if args.mukai is not None:
            v = MukaiVector(*args.mukai)
            fc = h0_bound_wall(v, cfg.surface)
            cert = Certificate("h0_bound_wall", data={"v": v})
            cert.add("radical_floor", value=fc.value, floor=fc.floor)
            params["v"] = v
            result = {"bound": fc.value, "floor": fc.floor}
        elif cfg.case is not None:
            ceiling, fc = h0_ceiling(cfg.case)
            cert = Certificate("h0_ceiling", data={"ceiling": ceiling})
            cert.add("radical_floor", value=fc.value, floor=fc.floor)
            params.update(cfg.case.params())
            result = {"bound": fc.value, "floor": ceiling}
        else:
            raise UsageError("h0 needs --mukai R C S with --h2, or a case")
        certs.append(cert.to_json())
    ok = all(c.get("holds", False) for c in certs)
    return _envelope(cfg, "verify", params, result, certs, "ok" if ok else "failed")


def _case_or_none(cfg: RunConfig) -> Optional[Case]:
    return cfg.case


def cmd_plot(cfg: RunConfig, figure: str) -> tuple:
    from . import plotting

    surf = cfg.surface
    case = _case_or_none(cfg)
    hole_bound = cfg.bounds or 6
    points = named_points(case) if case is not None else {}
    if figure == "regions":
        indices: List[Fraction] = []
        if case is not None:
            m, n, eps = case.region_params
            j = m + eps
            while j <= n:
                indices.append(j)
                j += Fraction(1, 2)
        fig = plotting.regions_figure(surf, indices, points, hole_bound=hole_bound)
    elif figure == "walls":
        walls = []
        if case is not None:
            seg = verify_first_wall(case, cfg.bounds).wall.segment
            if seg is not None:
                walls.append(seg)
        fig = plotting.walls_figure(surf, walls, points, hole_bound=hole_bound)
    else:
        if case is None:
            raise UsageError("polygon needs --case-a R S or --case-b P")
        if isinstance(case, CaseAParams):
            outer, inner = triangle_a(case.r, case.s), inner_polygon_a(case.r, case.s)
        else:
            outer, inner = triangle_b(case.p), inner_polygon_b(case.p)
        labels = {f"{case.label}.g1": outer[1], f"{case.label}.g2": outer[2]}
        for i, vert in enumerate(inner[1:-1], start=1):
            labels[f"{case.label}.inner{i}"] = vert
        fig = plotting.polygon_figure(outer + [outer[0]], inner, labels)
    svg, manifest = fig.to_svg()
    params = {"figure": figure, **(case.params() if case else {})}
    return svg, _envelope(cfg, "plot", params, manifest, [], "ok")


def cmd_recheck(path: Path) -> Dict[str, Any]:
    doc = json.loads(path.read_text(encoding="utf-8"))
    results = []
    for cert in doc.get("certificate", []):
        results.append(_recheck_tree(cert))
    ok = bool(results) and all(results)
    return {"tool_version": __version__, "command": "recheck", "source": str(path),
            "recorded_status": doc.get("status"), "rechecked": results, "status": "ok" if ok else "failed"}


def _recheck_tree(cert: Dict[str, Any]) -> bool:
    ok = True
    if cert.get("checks"):
        ok = recheck_certificate(cert)
    for sub in cert.get("u_certificates", []):
        ok = ok and _recheck_tree(sub)
    return ok


# --- entry point ------------------------------------------------------------------

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "recheck":
            doc = cmd_recheck(args.path)
            _emit_json(doc, None)
            return EXIT_OK if doc["status"] == "ok" else EXIT_FAIL
        cfg = _config(args)
        if args.command == "roots":
            doc = cmd_roots(cfg, args.region)
        elif args.command == "verify":
            doc = cmd_verify(cfg, args)
        else:
            svg, doc = cmd_plot(cfg, args.figure)
            out = cfg.out or Path(f"{args.figure}.svg")
            out.write_bytes(svg)
            doc["result"]["file"] = str(out)
            _emit_json(doc, None)
            return EXIT_OK
        _emit_json(doc, cfg.out)
        return EXIT_OK if doc["status"] == "ok" else EXIT_FAIL
    except (WallMismatch, CertificateFailure) as exc:
        print(f"mukai-walls: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, CaseError, LatticeError, PreconditionViolation, StabilityPlaneError) as exc:
        print(f"mukai-walls: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UndecidedComparison, WallError) as exc:
        print(f"mukai-walls: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"mukai-walls: I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
