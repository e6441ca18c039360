from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import float_support, polygon_area2
from setid.exceptions import DimensionError, InfeasibleError, InvalidInputError, UnboundedError
from setid.polytope import (
    ConvexRegion2D, HalfspaceSystem, contains, convex_hull, intersect_halfplane, maximizer, minkowski_sum_2d,
    region_to_system, scale, support, vertices_2d, violated,
)

F = Fraction
coord = st.fractions(min_value=-3, max_value=3, max_denominator=8)
points = st.lists(st.tuples(coord, coord), min_size=1, max_size=9)


def box(x, y):
    return HalfspaceSystem(2, inequalities=[((-1, 0), 0), ((0, -1), 0), ((1, 0), x), ((0, 1), y)])


def test_min_vagueness_vertices():
    s = box(F("0.6"), F("0.4")).add(inequalities=[((1, 1), F("0.85"))])
    r = vertices_2d(s)
    assert r.vertices == ((0, 0), (F("0.6"), 0), (F("0.6"), F("0.25")), (F("0.45"), F("0.4")), (0, F("0.4")))


def test_support_and_maximizer():
    s = box(2, 3)
    assert support(s, (1, 1)) == 5
    assert support(s, (-1, 0)) == 0
    assert maximizer(s, (1, 0)).x[0] == 2


def test_contains_and_violated():
    s = HalfspaceSystem(2, inequalities=[((1, 0), 1)], equalities=[((0, 1), 0)], labels=["x <= 1"])
    assert contains(s, (1, 0))
    assert not contains(s, (2, 0))
    assert violated(s, (2, 1)) == [0]  # equalities are not listed


def test_dimension_checks():
    with pytest.raises(DimensionError):
        contains(box(1, 1), (0, 0, 0))
    with pytest.raises(DimensionError):
        vertices_2d(HalfspaceSystem(3, inequalities=[((1, 0, 0), 1)]))


def test_empty_and_unbounded_systems():
    with pytest.raises(InfeasibleError):
        vertices_2d(box(1, 1).add(inequalities=[((1, 1), -1)]))
    with pytest.raises(UnboundedError):
        vertices_2d(HalfspaceSystem(2, inequalities=[((-1, 0), 0), ((0, -1), 0)]))


def test_serialisation_round_trip():
    s = box(F(1, 3), 2).add(inequalities=[((1, 1), 2)], equalities=[((1, 1), 1)], labels=["sum"])
    assert HalfspaceSystem.from_dict(s.to_dict()) == s
    r = ConvexRegion2D(((0, 0), (F(1, 3), 0), (0, F(2, 7))))
    assert ConvexRegion2D.from_dict(r.to_dict()) == r
    assert r.to_dict()["axes"] == ["theta1", "theta0"]


def test_degenerate_regions():
    pt = ConvexRegion2D(((1, 1), (1, 1)))
    assert pt.vertices == ((1, 1),)
    seg = ConvexRegion2D(((0, 0), (0, 1), (0, F(1, 2))))
    assert seg.vertices == ((0, 0), (0, 1))
    assert seg.contains((0, F(1, 3)))
    assert not seg.contains((F(1, 9), F(1, 3)))
    with pytest.raises(InvalidInputError):
        ConvexRegion2D(())


def test_minkowski_abstention_example():
    obs = ConvexRegion2D.rectangle(F("0.4"), F("0.3"))
    tri = ConvexRegion2D(((0, 0), (F("0.3"), 0), (0, F("0.3"))))
    out = minkowski_sum_2d(obs, tri)
    assert out.vertices == ((0, 0), (F("0.7"), 0), (F("0.7"), F("0.3")), (F("0.4"), F("0.6")), (0, F("0.6")))


def test_scale_rejects_negative():
    with pytest.raises(InvalidInputError):
        scale(ConvexRegion2D(((0, 0),)), -1)


def test_halfplane_clip_empty():
    with pytest.raises(InfeasibleError):
        intersect_halfplane(ConvexRegion2D.rectangle(1, 1), (1, 1), -1)


@given(points)
def test_hull_is_canonical_and_convex(pts):
    hull = convex_hull(pts)
    assert hull == convex_hull(list(reversed(pts)))
    assert hull[0] == min(hull)
    if len(hull) >= 3:
        assert polygon_area2(hull) > 0
    r = ConvexRegion2D(tuple(pts))
    assert all(r.contains(p) for p in pts)


@given(points, points, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_minkowski_support_is_additive(a, b, d):
    A, B = ConvexRegion2D(tuple(a)), ConvexRegion2D(tuple(b))
    assert minkowski_sum_2d(A, B).support(d) == A.support(d) + B.support(d)
    assert len(minkowski_sum_2d(A, B)) <= len(A) + len(B)


@given(points, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_region_system_round_trip(pts, d):
    r = ConvexRegion2D(tuple(pts))
    s = region_to_system(r)
    assert support(s, d) == r.support(d)
    if len(r) >= 3:
        assert vertices_2d(s) == r


@given(points, st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), coord)
def test_halfplane_clip_matches_vertex_enumeration(pts, a, b):
    r = ConvexRegion2D(tuple(pts))
    if len(r) < 3:
        return
    s = region_to_system(r).add(inequalities=[(a, b)])
    try:
        expected = vertices_2d(s)
    except InfeasibleError:
        with pytest.raises(InfeasibleError):
            intersect_halfplane(r, a, b)
        return
    assert intersect_halfplane(r, a, b) == expected


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 6)), max_size=5),
       st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_support_lp_agrees_with_vertices(rows, d):
    s = box(3, 3).add(inequalities=[((a, b), c) for a, b, c in rows])
    r = vertices_2d(s)
    assert support(s, d) == r.support(d)
    assert abs(float(support(s, d)) + float_support(s, d).fun) < 1e-7
