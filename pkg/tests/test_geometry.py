import random
from fractions import Fraction

import pytest

from equitower import (
    BackendMismatchError,
    ExactBackendRefusedError,
    L1,
    L2,
    LINF,
    NoIntersectionError,
    GeometryError,
    NormSpec,
    Point,
    Space,
    affine_combination,
    distance,
    equidistant,
    lp,
    midpoint,
    scaled_equidistant,
    space_from_config,
    space_to_config,
    sphere_intersection_point,
)
from equitower.geometry import point_from_record, point_to_record
from equitower.sampling import rand_point

F = Fraction


def pt(x, y):
    return Point(F(x), F(y))


EXACT_SPACES = [Space(L1, "exact"), Space(L2, "exact"), Space(LINF, "exact")]


class TestDistance:
    def test_euclidean_three_four_five(self):
        assert distance(Space(L2, "exact"), pt(0, 0), pt(3, 4)) == 5

    def test_taxicab(self):
        assert distance(Space(L1, "exact"), pt(0, 0), pt(3, 4)) == 7

    def test_identity_in_max_norm(self):
        assert distance(Space(LINF, "exact"), pt(1, 1), pt(1, 1)) == 0

    def test_float_backends(self):
        assert distance(Space(L2, "float", 1e-9), Point(0.0, 0.0), Point(3.0, 4.0)) == pytest.approx(5.0)
        p32 = Space(lp("3/2"), "float", 1e-9)
        d = distance(p32, Point(0.0, 0.0), Point(1.0, 1.0))
        assert d == pytest.approx(2 ** (1 / 3) * 2 ** (1 / 3))  # (1+1)^(2/3)

    def test_backend_mismatch_raises(self):
        with pytest.raises(BackendMismatchError):
            distance(Space(L2, "exact"), Point(0.5, 0.0), pt(1, 1))

    @pytest.mark.parametrize("space", EXACT_SPACES, ids=lambda s: s.norm.kind)
    def test_symmetry_identity_triangle_sampled(self, space):
        rng = random.Random(7)
        for _ in range(300):
            a, b, c = (rand_point(space, rng) for _ in range(3))
            assert space.eq_dist(a, b, b, a)
            assert distance(space, a, a) == 0
            d_ab, d_bc, d_ac = distance(space, a, b), distance(space, b, c), distance(space, a, c)
            assert d_ac <= d_ab + d_bc

    @pytest.mark.parametrize("space", EXACT_SPACES, ids=lambda s: s.norm.kind)
    def test_homogeneity_exact(self, space):
        rng = random.Random(8)
        for _ in range(200):
            a, b = rand_point(space, rng), rand_point(space, rng)
            lam = F(rng.randint(-12, 12), rng.randint(1, 6))
            la = Point(lam * a.x, lam * a.y)
            lb = Point(lam * b.x, lam * b.y)
            if space.norm.kind == "l2":
                assert space.sq_dist(la, lb) == lam * lam * space.sq_dist(a, b)
            else:
                assert space._exact_len(la, lb) == abs(lam) * space._exact_len(a, b)

    def test_zero_distance_implies_equality_exact(self):
        space = Space(L2, "exact")
        rng = random.Random(9)
        for _ in range(200):
            a, b = rand_point(space, rng), rand_point(space, rng)
            if distance(space, a, b) == 0:
                assert a == b


class TestPredicates:
    def test_equidistant_examples(self):
        s2 = Space(L2, "exact")
        assert equidistant(s2, pt(0, 0), pt(0, 5), pt(3, 4), pt(0, 0))
        assert equidistant(Space(LINF, "exact"), pt(0, 0), pt(2, 1), pt(0, 0), pt(1, 2))
        for space in EXACT_SPACES:
            assert equidistant(space, pt(7, 7), pt(7, 7), pt(-2, 3), pt(-2, 3))

    def test_scaled_equidistant_examples(self):
        assert scaled_equidistant(Space(L2, "exact"), pt(0, 0), pt(4, 0), 2, pt(1, 1), pt(3, 1))
        assert scaled_equidistant(Space(L2, "exact"), pt(5, 5), pt(5, 5), 0, pt(1, 1), pt(3, 1))
        assert scaled_equidistant(Space(L1, "exact"), pt(0, 0), pt(1, 0), F(1, 2), pt(0, 0), pt(1, 1))
        with pytest.raises(GeometryError):
            scaled_equidistant(Space(L1, "exact"), pt(0, 0), pt(1, 0), -1, pt(0, 0), pt(1, 1))

    def test_affine_combination_endpoints_and_extension(self):
        a, b = pt(0, 0), pt(1, 0)
        assert affine_combination(a, b, F(0)) == a
        assert affine_combination(a, b, F(1)) == b
        assert affine_combination(a, b, F(3)) == pt(3, 0)
        assert midpoint(pt(0, 0), pt(2, 4)) == pt(1, 2)

    def test_path_sum_eq_ixes_corner_paths(self):
        s2 = Space(L2, "exact")
        assert s2.path_sum_eq(pt(0, 0), pt(1, 1), pt(2, 2))
        assert not s2.path_sum_eq(pt(0, 0), pt(1, 1), pt(2, 0))
        si = Space(LINF, "exact")
        assert si.path_sum_eq(pt(0, 0), pt(2, 1), pt(4, 0))

    def test_defect_band_predicate(self):
        s2 = Space(L2, "exact")
        a, b, c = pt(0, 0), pt(1, 0), pt(3, 0)
        assert s2.path_defect_at_most(a, b, c, F(1, 32))
        assert not s2.path_defect_at_most(a, pt(1, 2), c, F(1, 32))


class TestSphereIntersection:
    def test_tangent_circles_euclidean(self):
        space = Space(L2, "float", 1e-9)
        e = sphere_intersection_point(space, Point(0.0, 0.0), 1.0, Point(2.0, 0.0), 1.0)
        assert e == pytest.approx((1.0, 0.0))

    def test_taxicab_diamonds_meet_exactly(self):
        space = Space(L1, "exact")
        e = sphere_intersection_point(space, pt(0, 0), F(2), pt(2, 0), F(2))
        assert space._exact_len(pt(0, 0), e) == 2
        assert space._exact_len(pt(2, 0), e) == 2

    def test_disjoint_spheres_refused(self):
        with pytest.raises(NoIntersectionError):
            sphere_intersection_point(Space(L2, "float", 1e-9), Point(0.0, 0.0), 1.0, Point(5.0, 0.0), 1.0)

    def test_exact_euclidean_refused(self):
        with pytest.raises(ExactBackendRefusedError):
            sphere_intersection_point(Space(L2, "exact"), pt(0, 0), F(1), pt(1, 1), F(1))

    @pytest.mark.parametrize("kind", ["l1", "linf"])
    def test_polygonal_walk_random_configurations(self, kind):
        space = Space(NormSpec(kind), "exact")
        rng = random.Random(11)
        hits = 0
        for _ in range(300):
            c, d = rand_point(space, rng), rand_point(space, rng)
            g = space._exact_len(c, d)
            if g == 0:
                continue
            radius_c = g * F(rng.randint(1, 8), 8)
            radius_d_lo = abs(radius_c - g)
            radius_d = radius_d_lo + (radius_c + g - radius_d_lo) * F(rng.randint(0, 8), 8)
            e = sphere_intersection_point(space, c, radius_c, d, radius_d)
            assert space._exact_len(c, e) == radius_c
            assert space._exact_len(d, e) == radius_d
            hits += 1
        assert hits > 250

    def test_float_box_norms_reuse_exact_walk(self):
        space = Space(LINF, "float", 1e-9)
        e = sphere_intersection_point(space, Point(0.0, 0.0), 1.0, Point(1.5, 0.25), 1.0)
        assert abs(space._fdist(Point(0.0, 0.0), e) - 1.0) < 1e-9
        assert abs(space._fdist(Point(1.5, 0.25), e) - 1.0) < 1e-9

    def test_lp_numeric_solve(self):
        space = Space(lp("3/2"), "float", 1e-9)
        e = sphere_intersection_point(space, Point(0.0, 0.0), 2.0, Point(1.0, 0.5), 1.5)
        assert abs(space._fdist(Point(0.0, 0.0), e) - 2.0) < 1e-8
        assert abs(space._fdist(Point(1.0, 0.5), e) - 1.5) < 1e-8

    def test_equal_centers_need_equal_radii(self):
        space = Space(L1, "exact")
        e = sphere_intersection_point(space, pt(1, 1), F(3), pt(1, 1), F(3))
        assert space._exact_len(pt(1, 1), e) == 3
        with pytest.raises(NoIntersectionError):
            sphere_intersection_point(space, pt(1, 1), F(3), pt(1, 1), F(2))


class TestSpaceConfig:
    def test_validation(self):
        with pytest.raises(GeometryError):
            Space(lp("3/2"), "exact")
        with pytest.raises(GeometryError):
            Space(L2, "exact", 1e-9)
        with pytest.raises(GeometryError):
            Space(L2, "float", -1.0)
        with pytest.raises(GeometryError):
            NormSpec("lp", F(1))
        with pytest.raises(GeometryError):
            NormSpec("l7")

    def test_config_round_trip(self):
        for cfg in (
            {"norm": "l1", "backend": "exact", "tolerance": 0},
            {"norm": {"lp": "3/2"}, "backend": "float", "tolerance": 1e-9},
        ):
            space = space_from_config(cfg)
            again = space_from_config(space_to_config(space))
            assert again == space

    def test_point_records(self):
        exact = Space(L2, "exact")
        p = point_from_record(exact, {"x": "1/2", "y": "-3"})
        assert p == pt("1/2", -3)
        assert point_to_record(exact, p) == {"x": "1/2", "y": "-3"}
        with pytest.raises(BackendMismatchError):
            point_from_record(exact, {"x": 0.5, "y": 1.0})
        fl = Space(L2, "float", 1e-9)
        q = point_from_record(fl, {"x": 0.5, "y": 1})
        assert q == Point(0.5, 1.0)
