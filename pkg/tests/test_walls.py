import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from mukai_walls.geometry import Line, PlanePoint
from mukai_walls.lattice import MukaiVector, SurfaceParams, project
from mukai_walls.stability_plane import central_charge, params_from_point, same_phase
from mukai_walls.walls import (EmptyWindow, NoWallFound, ProportionalClasses, SlopeWindow, UnderdeterminedWall,
                               WallError, chord, enumerate_destabilizer_candidates,
                               enumerate_hn_factor_candidates, first_wall_candidates, gieseker_first_wall,
                               no_wall_at_b, wall_line)

from oracles import hn_candidate_count, naive_first_wall_candidates


def _same_phase_at(v, v1, pt, surf):
    sp = params_from_point(pt, surf)
    return same_phase(central_charge(v, sp, surf), central_charge(v1, sp, surf))


def test_wall_line_examples():
    p = 13
    surf = SurfaceParams(2 * p)
    line = wall_line(MukaiVector(0, 4, 0), MukaiVector(4, 2, p), surf)
    assert line == Line.horizontal(Fraction(4, p))
    assert line.contains(PlanePoint(Fraction(2, p), Fraction(4, p)))
    assert line.contains(PlanePoint(Fraction(-2, p), Fraction(4, p)))

    r, s = 3, 5
    surf = SurfaceParams(2 * r * s)
    v, vbar = MukaiVector(0, r, 2 * r * s - r * r * s), MukaiVector(r, 1, s)
    line = wall_line(v, vbar, surf)
    assert line.contains(project(vbar)) and line.contains(project(v - vbar))

    with pytest.raises(ProportionalClasses):
        wall_line(v, v * 2, surf)
    with pytest.raises(UnderdeterminedWall):
        wall_line(MukaiVector(0, 4, 0), MukaiVector(1, 1, 0), surf)


vecs = st.builds(MukaiVector, st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))


@given(vecs, vecs)
def test_wall_line_symmetric_in_sides(v, v1):
    surf = SurfaceParams(20)
    try:
        line = wall_line(v, v1, surf)
    except WallError:
        assume(False)
    assert wall_line(v, v - v1, surf) == line


@settings(suppress_health_check=[HealthCheck.filter_too_much])
@given(vecs, vecs, st.fractions(-1, 1, max_denominator=20))
def test_wall_line_is_equal_phase_locus(v, v1, x):
    surf = SurfaceParams(20)
    try:
        line = wall_line(v, v1, surf)
    except WallError:
        assume(False)
    assume(line.b != 0)
    pt = PlanePoint(x, line.y_at(x))
    assume(pt.y > 10 * x * x and pt.y > 0)
    assert _same_phase_at(v, v1, pt, surf)
    off = PlanePoint(x, pt.y + Fraction(1, 7))
    # off the line the phases separate unless the charges are degenerate there
    sp = params_from_point(off, surf)
    z, z1 = central_charge(v, sp, surf), central_charge(v1, sp, surf)
    assume((z.re, z.im) != (0, 0) and (z1.re, z1.im) != (0, 0))
    assert not same_phase(z, z1)


def test_no_wall_at_b_examples():
    assert no_wall_at_b(MukaiVector(3, 1, 7), 0, 1)
    assert not no_wall_at_b(MukaiVector(4, 2, 13), 0, 1)
    for p in (13, 15, 17):
        assert no_wall_at_b(MukaiVector(-p, 2, -4), -1, (p + 1) // 2)
    with pytest.raises(WallError):
        no_wall_at_b(MukaiVector(1, 1, 1), 2, 4)


def test_destabilizer_examples():
    surf = SurfaceParams(20)
    v = MukaiVector(0, 2, 0)
    window = SlopeWindow(Fraction(-1, 2), Fraction(1, 2))
    found = enumerate_destabilizer_candidates(v, Line.horizontal(Fraction(2, 5)), window, surf)
    assert [v1 for v1, _ in found] == [MukaiVector(2, 1, 5)]

    surf = SurfaceParams(26)
    v = MukaiVector(0, 4, 0)
    found = enumerate_destabilizer_candidates(v, Line.horizontal(Fraction(4, 13)), window, surf)
    assert [v1 for v1, _ in found] == [MukaiVector(4, 2, 13)]
    wall = found[0][1]
    seg = wall.segment
    rng = random.Random(0)
    for _ in range(3):
        t = Fraction(rng.randint(1, 99), 100)
        pt = PlanePoint(seg[0].x + t * (seg[1].x - seg[0].x), seg[0].y + t * (seg[1].y - seg[0].y))
        assert _same_phase_at(v, wall.witness[0], pt, surf)
    for height in (Fraction(3, 13), Fraction(1, 5), Fraction(1, 13)):
        assert enumerate_destabilizer_candidates(v, Line.horizontal(height), window, surf) == []


def test_empty_window():
    with pytest.raises(EmptyWindow):
        SlopeWindow(1, 0)


def test_hn_candidates():
    v = MukaiVector(0, 2, 0)
    surf = SurfaceParams(20)
    got = enumerate_hn_factor_candidates(v, surf)
    assert MukaiVector(2, 1, 5) in got and MukaiVector(-2, 1, -5) in got
    assert len(got) == len(set(got)) == hn_candidate_count(0, 2, 0, 20)
    assert got == sorted(got)
    for u in got:
        assert 0 < u.c <= 2 and u.r * u.s <= u.c * u.c * 11
    with pytest.raises(WallError):
        enumerate_hn_factor_candidates(MukaiVector(1, 0, 1), surf)


@pytest.mark.parametrize("r,c,s,h2", [(0, 3, -15, 30), (1, 2, 3, 10), (0, 4, 0, 26)])
def test_hn_candidates_match_oracle(r, c, s, h2):
    assert len(enumerate_hn_factor_candidates(MukaiVector(r, c, s), SurfaceParams(h2))) == hn_candidate_count(r, c, s, h2)


@pytest.mark.parametrize("r,s", [(2, 5), (3, 5), (3, 6), (2, 7)])
def test_first_wall_family_a(r, s):
    surf = SurfaceParams(2 * r * s)
    v, vbar = MukaiVector(0, r, 2 * r * s - r * r * s), MukaiVector(r, 1, s)
    res = gieseker_first_wall(v, surf)
    assert res.wall.witness == (vbar, v - vbar)
    assert res.wall.line.contains(project(vbar))
    p = PlanePoint(Fraction(-1, s * (r - 1)), Fraction(r, s * (r - 1) ** 2))
    assert set(res.wall.segment) == {p, project(vbar)}
    assert all(y >= res.wall.probe_point.y for _, y in res.candidates)


@pytest.mark.parametrize("p", [13, 15, 17])
def test_first_wall_family_b(p):
    surf = SurfaceParams(2 * p)
    res = gieseker_first_wall(MukaiVector(0, 4, 0), surf)
    assert res.wall.witness[0] == MukaiVector(4, 2, p)
    assert res.wall.line == Line.horizontal(Fraction(4, p))


@pytest.mark.parametrize("r,c,s,h2,bound", [(0, 2, 0, 20, 40), (0, 3, -15, 30, 60), (0, 4, 0, 26, 60),
                                            (0, 3, -18, 36, 60), (0, 3, 2, 10, 40)])
def test_first_wall_candidates_match_oracle(r, c, s, h2, bound):
    got = [(u.as_tuple(), y) for u, y in first_wall_candidates(MukaiVector(r, c, s), SurfaceParams(h2), bound)]
    assert got == naive_first_wall_candidates(r, c, s, h2, bound)


def test_first_wall_bounds_monotone():
    v, surf = MukaiVector(0, 3, -15), SurfaceParams(30)
    previous = set()
    for bound in (5, 10, 20, 40, 80):
        now = {u for u, _ in first_wall_candidates(v, surf, bound)}
        assert previous <= now
        previous = now


def test_no_wall_found():
    with pytest.raises(NoWallFound):
        gieseker_first_wall(MukaiVector(0, 1, 0), SurfaceParams(20))
    with pytest.raises(WallError):
        gieseker_first_wall(MukaiVector(1, 1, 0), SurfaceParams(20))


def test_chord_endpoints_on_parabola():
    surf = SurfaceParams(20)
    ch = chord(Line.horizontal(Fraction(2, 5)), surf)
    assert ch.endpoints() == (PlanePoint(Fraction(-1, 5), Fraction(2, 5)), PlanePoint(Fraction(1, 5), Fraction(2, 5)))
    ch = chord(Line.through(PlanePoint(0, Fraction(1, 3)), PlanePoint(1, 1)), surf)
    assert ch.endpoints() is None
    (xl, yl), (xr, yr) = ch.float_endpoints()
    assert abs(yl - 10 * xl * xl) < 1e-9 and abs(yr - 10 * xr * xr) < 1e-9
