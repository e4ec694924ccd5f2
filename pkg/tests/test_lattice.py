from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukai_walls.geometry import PlanePoint
from mukai_walls.lattice import (INFINITY, LatticeError, MukaiVector, SurfaceParams, UndefinedProjection,
                                 enumerate_roots_in_box, euler_char, is_root, pairing, project, slope, square)
from mukai_walls.stability_plane import empty_region, rectangle

from oracles import naive_roots, naive_square

ints = st.integers(-10**6, 10**6)
vectors = st.builds(MukaiVector, ints, ints, ints)
surfaces = st.integers(1, 60).map(lambda g: SurfaceParams(2 * g))


@given(vectors, vectors, surfaces)
def test_pairing_symmetric(a, b, surf):
    assert pairing(a, b, surf) == pairing(b, a, surf)


@given(vectors, vectors, vectors, st.integers(-50, 50), surfaces)
def test_pairing_bilinear(a, a2, b, k, surf):
    assert pairing(a + a2, b, surf) == pairing(a, b, surf) + pairing(a2, b, surf)
    assert pairing(a * k, b, surf) == k * pairing(a, b, surf)


@given(vectors, surfaces)
def test_square_matches_formula(v, surf):
    assert square(v, surf) == naive_square(v.r, v.c, v.s, surf.h2)


def test_surface_params_validation():
    with pytest.raises(LatticeError):
        SurfaceParams(3)
    with pytest.raises(LatticeError):
        SurfaceParams(0)
    assert SurfaceParams(20).genus == 11


def test_pairing_examples():
    assert square(MukaiVector(1, 0, 1), SurfaceParams(2)) == -2
    for r, s in [(2, 5), (3, 7), (4, 9)]:
        assert square(MukaiVector(r, 1, s), SurfaceParams(2 * r * s)) == 0
    for p in (13, 15):
        assert square(MukaiVector(4, 2, p), SurfaceParams(2 * p)) == 0
        assert square(MukaiVector(0, 4, 0), SurfaceParams(2 * p)) == 32 * p
    for n in (1, 5, 13):
        assert square(MukaiVector(1, 1, n + 1), SurfaceParams(2 * n)) == -2


def test_push_forward_square_grid():
    for s in range(5, 21):
        for r in range(2, s + 1):
            surf = SurfaceParams(2 * r * s)
            v = MukaiVector(0, r, 2 * r * s - r * r * s)
            assert square(v, surf) == r * r * surf.h2


def test_euler_char_and_slope():
    assert euler_char(MukaiVector(1, 0, 1)) == 2
    assert euler_char(MukaiVector(4, 2, 13)) == 17
    assert slope(MukaiVector(0, 4, 0)) is INFINITY
    assert slope(MukaiVector(3, 1, 5)) == Fraction(1, 3)
    assert slope(MukaiVector(-3, 2, -20)) == Fraction(-2, 3)
    assert INFINITY > Fraction(10**9)


def test_project():
    r, s = 3, 5
    assert project(MukaiVector(r, 1, s)) == PlanePoint(Fraction(1, s), Fraction(r, s))
    diff = MukaiVector(-r, r - 1, -s * (r - 1) ** 2)
    assert project(-diff) == PlanePoint(Fraction(-1, s * (r - 1)), Fraction(r, s * (r - 1) ** 2))
    assert project(MukaiVector(-13, 2, -4)) == PlanePoint(Fraction(-1, 2), Fraction(13, 4))
    with pytest.raises(UndefinedProjection):
        project(MukaiVector(1, 1, 0))


def test_roots_small_box():
    roots = enumerate_roots_in_box(SurfaceParams(2), 3, 3, 3)
    assert MukaiVector(1, 0, 1) in roots and MukaiVector(1, 1, 2) in roots
    assert roots == sorted(roots)
    assert all(is_root(d, SurfaceParams(2)) for d in roots)


def test_roots_region_filters():
    surf = SurfaceParams(20)
    assert enumerate_roots_in_box(surf, 5, 5, 5, empty_region()) == []
    box = rectangle(Fraction(1, 5) - Fraction(1, 100), Fraction(2, 5) - Fraction(1, 100),
                    Fraction(1, 5) + Fraction(1, 100), Fraction(2, 5) + Fraction(1, 100))
    assert enumerate_roots_in_box(surf, 6, 6, 6, box) == []


@pytest.mark.parametrize("h2", [2, 10, 20, 26])
def test_roots_match_triple_loop(h2):
    surf = SurfaceParams(h2)
    for b in range(1, 9):
        got = [d.as_tuple() for d in enumerate_roots_in_box(surf, b, b, b)]
        assert got == naive_roots(h2, b, b, b)


def test_roots_asymmetric_box():
    surf = SurfaceParams(10)
    got = [d.as_tuple() for d in enumerate_roots_in_box(surf, 2, 7, 5)]
    assert got == naive_roots(10, 2, 7, 5)


def test_roots_bad_bounds():
    with pytest.raises(LatticeError):
        enumerate_roots_in_box(SurfaceParams(2), 0, 3, 3)
