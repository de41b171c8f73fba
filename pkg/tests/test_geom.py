import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropnp.geom import (Cone, GeometryError, Polyhedron, convex_hull,
                         covered_by_union, is_dicritical_cone, union_equal)

F = Fraction


def verts(p):
    return set(p.vertices)


class TestConvexHull:
    def test_unit_square(self):
        p = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert verts(p) == {(0, 0), (1, 0), (0, 1), (1, 1)}
        assert len(p.hrep()[0]) == 4
        assert not p.hrep()[1]

    def test_midpoint_dropped_from_vertex_list(self):
        # (1,1) sits on the segment between (2,0) and (0,2)
        p = convex_hull([(2, 0), (1, 0), (1, 1), (0, 1), (0, 2)])
        assert verts(p) == {(1, 0), (2, 0), (0, 2), (0, 1)}
        assert p.contains((1, 1))

    def test_single_point(self):
        p = convex_hull([(3, 5)])
        assert p.dim == 0
        assert verts(p) == {(3, 5)}

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            convex_hull([(0, 0), (1, 0, 0)])


class TestDualDescription:
    def test_halfline(self):
        p = Polyhedron.from_hrep(1, [((-1,), 0)]).dual_description()
        assert verts(p) == {(F(0),)}
        assert p.rays == [(1,)]

    def test_wedge_by_hand(self):
        p = Polyhedron.from_hrep(2, [((1, 1), 0), ((1, 0), 0)]).dual_description()
        assert verts(p) == {(0, 0)}
        assert set(p.rays) == {(0, -1), (-1, 1)}

    def test_empty_intersection(self):
        p = Polyhedron.from_hrep(1, [((1,), -1), ((-1,), -1)])
        assert p.is_empty

    def test_idempotent_roundtrip(self):
        p = convex_hull([(0, 0), (2, 0), (0, 3)])
        ineqs, eqs = p.hrep()
        q = Polyhedron.from_hrep(2, ineqs, eqs)
        assert q.equal_as_sets(p)
        assert q.canonical_key() == p.canonical_key()


class TestMinkowskiSum:
    def test_segments_make_square(self):
        s1 = Polyhedron.from_generators(2, [(0, 0), (1, 0)])
        s2 = Polyhedron.from_generators(2, [(0, 0), (0, 1)])
        sq = s1.minkowski_sum(s2)
        assert verts(sq) == {(0, 0), (1, 0), (0, 1), (1, 1)}

    def test_origin_is_neutral(self):
        p = convex_hull([(0, 0), (4, 2), (0, 2)])
        assert p.minkowski_sum(Polyhedron.point((0, 0))).equal_as_sets(p)

    def test_directional_face_of_sum(self):
        d1 = convex_hull([(0, 0), (0, 1), (0, 2), (1, 2), (2, 1), (4, 2)])
        d2 = convex_hull([(0, 0), (0, 1), (2, 1), (3, 2), (4, 2)])
        face = d1.minkowski_sum(d2).face_in_direction((1, -2))
        assert verts(face) == {(0, 0), (8, 4)}


class TestFaceInDirection:
    def test_collinear_triple_face(self):
        d1 = convex_hull([(0, 0), (0, 1), (0, 2), (1, 2), (2, 1), (4, 2)])
        face = d1.face_in_direction((1, -2))
        assert verts(face) == {(0, 0), (4, 2)}
        assert face.contains((2, 1))

    def test_square_edges_and_corners(self):
        sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert verts(sq.face_in_direction((0, 1))) == {(0, 1), (1, 1)}
        assert verts(sq.face_in_direction((1, 1))) == {(1, 1)}

    def test_unbounded_direction_gives_no_face(self):
        p = Polyhedron.from_hrep(2, [((1, 0), 0)])
        assert p.face_in_direction((-1, 0)) is None


class TestRecessionCone:
    def test_polytope_is_trivial(self):
        assert convex_hull([(0, 0), (1, 0), (0, 1)]).recession_cone().is_trivial

    def test_halfplane(self):
        c = Polyhedron.from_hrep(2, [((1, 0), 0)]).recession_cone()
        assert c.rays == ((-1, 0),)
        assert c.lineality == ((0, 1),)

    def test_halfline(self):
        c = Polyhedron.from_generators(2, [(3, 1)], rays=[(1, -2)]).recession_cone()
        assert c.rays == ((1, -2),)

    def test_empty_errors(self):
        with pytest.raises(GeometryError):
            Polyhedron.empty(2).recession_cone()


class TestDicriticalCone:
    def test_examples(self):
        assert is_dicritical_cone(Cone(2, [(1, -2)]))
        assert not is_dicritical_cone(Cone(2, [(-1, 0)]))
        assert not is_dicritical_cone(Cone(2, []))

    def test_scaling_invariance(self):
        for r in [(1, -2), (-3, -1), (0, -7), (2, 5)]:
            for k in (1, 2, 17):
                scaled = tuple(k * x for x in r)
                assert (is_dicritical_cone(Cone(2, [r]))
                        == is_dicritical_cone(Cone(2, [scaled])))

    def test_lineality_always_dicritical(self):
        assert is_dicritical_cone(Cone(2, [], [(0, -1)]))


class TestBasicOps:
    def test_intersect_square_halfplane(self):
        sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        edge = sq.intersect(Polyhedron.from_hrep(2, [((-1, 0), -1)]))
        assert verts(edge) == {(1, 0), (1, 1)}

    def test_plane_contains(self):
        pl = Polyhedron.from_hrep(3, [], [((1, 0, 0), -1)])
        assert pl.contains((-1, 5, -7))
        assert not pl.contains((0, 5, -7))

    def test_affine_dim(self):
        edge = Polyhedron.from_generators(2, [(0, 0), (4, 2)])
        assert edge.dim == 1
        assert Polyhedron.empty(2).dim == -1

    def test_relative_interior_point(self):
        sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        p = sq.relative_interior_point()
        ineqs, _ = sq.hrep()
        assert all(sum(a * x for a, x in zip(n, p)) < b for n, b in ineqs)

    def test_equal_as_sets_across_representations(self):
        a = Polyhedron.from_hrep(2, [((1, 0), 1), ((-1, 0), 0),
                                     ((0, 1), 1), ((0, -1), 0)])
        b = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
        assert a.equal_as_sets(b)


def _random_points(rng, n, count):
    return [tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n))
            for _ in range(count)]


class TestRandomizedProperties:
    def test_hull_contains_inputs_and_vertices_are_inputs(self):
        rng = random.Random(20240301)
        for _ in range(40):
            n = rng.randint(1, 3)
            pts = _random_points(rng, n, rng.randint(1, 8))
            hull = convex_hull(pts)
            assert all(hull.contains(p) for p in pts)
            assert set(hull.vertices) <= set(pts)

    def test_minkowski_support_function_is_additive(self):
        rng = random.Random(20240302)
        for _ in range(15):
            n = rng.randint(2, 3)
            p = convex_hull(_random_points(rng, n, rng.randint(1, 5)))
            q = convex_hull(_random_points(rng, n, rng.randint(1, 5)))
            s = p.minkowski_sum(q)
            for _ in range(20):
                d = tuple(F(rng.randint(-5, 5)) for _ in range(n))
                if all(x == 0 for x in d):
                    continue
                assert s.support_value(d) == p.support_value(d) + q.support_value(d)
            for _ in range(5):
                x = p.relative_interior_point()
                y = q.relative_interior_point()
                assert s.contains(tuple(a + b for a, b in zip(x, y)))

    def test_recession_cone_of_intersection(self):
        rng = random.Random(20240303)
        built = 0
        while built < 15:
            n = 2
            def rand_poly():
                ineqs = [(tuple(F(rng.randint(-3, 3)) for _ in range(n)),
                          F(rng.randint(-4, 4))) for _ in range(4)]
                ineqs = [(a, b) for a, b in ineqs if any(x != 0 for x in a)]
                return Polyhedron.from_hrep(n, ineqs)
            p, q = rand_poly(), rand_poly()
            pq = p.intersect(q)
            if p.is_empty or q.is_empty or pq.is_empty:
                continue
            built += 1
            assert pq.recession_cone() == p.recession_cone().intersect(q.recession_cone())


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
                min_size=1, max_size=7))
def test_hull_roundtrip_property(pts):
    hull = convex_hull(pts)
    ineqs, eqs = hull.hrep()
    again = Polyhedron.from_hrep(2, ineqs, eqs)
    assert again.equal_as_sets(hull)
    assert all(hull.contains(p) for p in pts)


class TestUnionCoverage:
    def test_segment_covered_by_two_pieces(self):
        seg = Polyhedron.from_generators(1, [(0,), (10,)])
        a = Polyhedron.from_generators(1, [(0,), (6,)])
        b = Polyhedron.from_generators(1, [(4,), (10,)])
        assert covered_by_union(seg, [a, b])
        assert union_equal([seg], [a, b])

    def test_gap_is_detected(self):
        seg = Polyhedron.from_generators(1, [(0,), (10,)])
        a = Polyhedron.from_generators(1, [(0,), (6,)])
        b = Polyhedron.from_generators(1, [(7,), (10,)])
        assert not covered_by_union(seg, [a, b])

    def test_touching_closed_pieces_cover_their_union_boundary(self):
        sq = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)])
        left = convex_hull([(0, 0), (1, 0), (0, 2), (1, 2)])
        right = convex_hull([(1, 0), (2, 0), (1, 2), (2, 2)])
        assert covered_by_union(sq, [left, right])
        assert not covered_by_union(sq, [left])
