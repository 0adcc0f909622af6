import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotiso.geometry import Box, Point3, distance
from knotiso.maps import (
    AffineMap,
    CompositeMap,
    ConeMap,
    IdentityMap,
    UnsquishMap,
    UnsquishParams,
    conjugate,
    estimate_inverse_lipschitz,
    make_cone_map,
    make_unsquish_map,
    roundtrip_error,
    unbounded_box,
)

UNIT = Box.from_center(Point3(0, 0, 0), Point3(1, 1, 1))


class TestIdentityMap:
    def test_fixes_everything_exactly(self):
        rng = np.random.default_rng(0)
        pts = rng.uniform(-10, 10, (500, 3))
        m = IdentityMap()
        assert np.array_equal(m.apply_array(pts), pts)
        assert m.inverse() is m


class TestAffineMap:
    def test_rejects_singular_matrix(self):
        with pytest.raises(ValueError):
            AffineMap(np.zeros((3, 3)), Point3(0, 0, 0))

    def test_accepts_uniformly_tiny_frames(self):
        # depth-20 scenario frames: tiny but perfectly conditioned
        AffineMap(np.eye(3) * 2.0**-27, Point3(0, 0, 0))

    def test_box_to_box_maps_corners(self):
        src = Box(Point3(-1, -1, -1), Point3(1, 1, 1))
        dst = Box(Point3(2, 0, -3), Point3(4, 1, -1))
        m = AffineMap.box_to_box(src, dst)
        assert distance(m.apply(src.lo), dst.lo) < 1e-12
        assert distance(m.apply(src.hi), dst.hi) < 1e-12
        assert distance(m.apply(src.center), dst.center) < 1e-12

    def test_inverse_roundtrip(self):
        rng = np.random.default_rng(1)
        m = AffineMap(rng.uniform(-1, 1, (3, 3)) + 2 * np.eye(3), Point3(1, -2, 3))
        pts = rng.uniform(-5, 5, (1000, 3))
        assert roundtrip_error(m, pts) < 1e-12

    def test_similarity(self):
        m = AffineMap.similarity(2.0, Point3(1, 0, 0))
        assert m.apply(Point3(1, 1, 1)) == Point3(3, 2, 2)

    def test_support_is_unbounded_sentinel(self):
        m = AffineMap.similarity(2.0, Point3(0, 0, 0))
        assert m.support == unbounded_box()


class TestConeMap:
    def test_rejects_apex_outside_region(self):
        with pytest.raises(ValueError):
            ConeMap(UNIT, Point3(2, 0, 0), Point3(0, 0, 0))
        with pytest.raises(ValueError):
            ConeMap(UNIT, Point3(0, 0, 0), Point3(0, 0, 1.0))

    def test_moves_apex_to_target(self):
        m = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, -0.2, 0.1))
        assert distance(m.apply(Point3(0, 0, 0)), Point3(0.3, -0.2, 0.1)) < 1e-12

    def test_fixes_boundary_and_exterior(self):
        m = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, -0.2, 0.1))
        rng = np.random.default_rng(2)
        # boundary points: project random points to a random face
        pts = UNIT.sample(rng, 2000)
        axes = rng.integers(0, 3, 2000)
        sides = rng.integers(0, 2, 2000)
        pts[np.arange(2000), axes] = np.where(sides == 0, -1.0, 1.0)
        assert np.abs(m.apply_array(pts) - pts).max() < 1e-12
        outside = rng.uniform(1.5, 3.0, (2000, 3)) * rng.choice([-1, 1], (2000, 3))
        assert np.array_equal(m.apply_array(outside), outside)

    def test_inverse_is_swapped_cone(self):
        m = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, -0.2, 0.1))
        inv = m.inverse()
        assert isinstance(inv, ConeMap)
        assert inv.p0 == m.p1 and inv.p1 == m.p0
        rng = np.random.default_rng(3)
        assert roundtrip_error(m, UNIT.sample(rng, 2000)) < 1e-9

    def test_interior_stays_interior(self):
        m = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.5, 0.3, -0.4))
        rng = np.random.default_rng(4)
        pts = UNIT.scaled_about_center(0.999).sample(rng, 2000)
        assert UNIT.contains_array(m.apply_array(pts)).all()

    def test_make_cone_map_degenerate_is_identity(self):
        m = make_cone_map(UNIT, Point3(0.1, 0, 0), Point3(0.1, 0, 0))
        assert isinstance(m, IdentityMap)
        assert m.support == UNIT


def _params(c: float, apex: Point3 = Point3(0, 0, 0)) -> UnsquishParams:
    return UnsquishParams(
        outer=Box.from_center(Point3(0, 0, 0), Point3(2, 2, 2)),
        inner=Box.from_center(Point3(0, 0, 0), Point3(1, 1, 1)),
        apex=apex,
        c=c,
    )


class TestUnsquishParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            _params(1.5)
        with pytest.raises(ValueError):
            _params(0.5, apex=Point3(3, 0, 0))
        with pytest.raises(ValueError):
            UnsquishParams(
                outer=Box.from_center(Point3(0, 0, 0), Point3(2, 2, 2)),
                inner=Box.from_center(Point3(0.5, 0, 0), Point3(1, 1, 1)),
                apex=Point3(0.5, 0, 0),
                c=0.5,
            )
        with pytest.raises(ValueError):
            UnsquishParams(
                outer=Box.from_center(Point3(0, 0, 0), Point3(2, 2, 3)),
                inner=Box.from_center(Point3(0, 0, 0), Point3(1, 1, 1)),
                apex=Point3(0, 0, 0),
                c=0.5,
            )

    def test_breakpoints(self):
        p = _params(0.4)
        assert p.s_c0 == pytest.approx(0.2)
        assert p.s_c1 == 0.5
        assert p.scale_up == pytest.approx(2.0)


class TestUnsquishMap:
    @pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
    def test_time_zero_is_identity(self, c):
        m = UnsquishMap(_params(c), 0.0)
        rng = np.random.default_rng(5)
        pts = m.params.outer.sample(rng, 1000)
        assert np.abs(m.apply_array(pts) - pts).max() < 1e-12

    @pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
    def test_time_one_exact_expansion_near_apex(self, c):
        # points with path parameter <= c/2 move away from the apex by 1/c
        m = UnsquishMap(_params(c), 1.0)
        rng = np.random.default_rng(6)
        d = rng.normal(size=(1000, 3))
        d /= np.sqrt((d**2).sum(-1))[:, None]
        # radial fraction f in (0, c): inside the exactly-expanded zone
        f = rng.uniform(0.01, 0.99 * c, 1000)
        scale = np.abs(d).max(axis=-1)  # inner box radial scale along d
        pts = f[:, None] * d / scale[:, None]
        img = m.apply_array(pts)
        r0 = np.sqrt((pts**2).sum(-1))
        r1 = np.sqrt((img**2).sum(-1))
        assert np.abs(r1 - r0 / c).max() < 1e-9

    def test_fixes_outer_boundary_and_exterior(self):
        m = UnsquishMap(_params(0.5), 0.7)
        rng = np.random.default_rng(7)
        outside = rng.uniform(2.5, 5.0, (1000, 3)) * rng.choice([-1, 1], (1000, 3))
        assert np.array_equal(m.apply_array(outside), outside)
        face = rng.uniform(-2, 2, (1000, 3))
        face[:, 0] = 2.0
        assert np.abs(m.apply_array(face) - face).max() < 1e-9

    @pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
    @pytest.mark.parametrize("t", [0.25, 0.5, 1.0])
    def test_roundtrip(self, c, t):
        m = UnsquishMap(_params(c, apex=Point3(0.2, -0.1, 0.3)), t)
        rng = np.random.default_rng(8)
        pts = m.params.outer.sample(rng, 2000)
        assert roundtrip_error(m, pts) < 1e-9

    def test_off_center_apex_exact_expansion(self):
        apex = Point3(0.3, -0.2, 0.1)
        m = UnsquishMap(_params(0.5, apex=apex), 1.0)
        rng = np.random.default_rng(9)
        a = apex.as_array()
        # short steps from the apex stay inside the protected zone
        pts = a + rng.normal(size=(500, 3)) * 0.01
        img = m.apply_array(pts)
        r0 = np.sqrt(((pts - a) ** 2).sum(-1))
        r1 = np.sqrt(((img - a) ** 2).sum(-1))
        assert np.abs(r1 - 2.0 * r0).max() < 1e-9

    def test_make_unsquish_map_family(self):
        fam = make_unsquish_map(_params(0.5))
        assert fam(0.3).t == 0.3
        with pytest.raises(ValueError):
            fam(1.5)


class TestCompositeAndConjugate:
    def test_left_to_right_order(self):
        shift = AffineMap.similarity(1.0, Point3(1, 0, 0))
        double = AffineMap.similarity(2.0, Point3(0, 0, 0))
        m = CompositeMap([shift, double])
        # shift first, then scale: (0,0,0) -> (1,0,0) -> (2,0,0)
        assert m.apply(Point3(0, 0, 0)) == Point3(2, 0, 0)

    def test_inverse_roundtrip(self):
        cone = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, 0.2, -0.1))
        m = CompositeMap([cone, UnsquishMap(_params(0.5), 1.0)])
        rng = np.random.default_rng(10)
        pts = rng.uniform(-3, 3, (2000, 3))
        assert roundtrip_error(m, pts) < 1e-9

    def test_conjugate_identity_outside_target(self):
        target = Box.from_center(Point3(5, 5, 5), Point3(0.5, 0.5, 0.5))
        frame = AffineMap.box_to_box(UNIT, target)
        cone = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, 0, 0))
        m = conjugate(frame, cone, target)
        assert m.support == target
        rng = np.random.default_rng(11)
        pts = rng.uniform(-2, 2, (1000, 3))  # far from the target box
        assert np.abs(m.apply_array(pts) - pts).max() < 1e-12

    def test_conjugate_moves_target_center(self):
        target = Box.from_center(Point3(5, 5, 5), Point3(0.5, 0.5, 0.5))
        frame = AffineMap.box_to_box(UNIT, target)
        cone = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.4, 0, 0))
        m = conjugate(frame, cone, target)
        img = m.apply(Point3(5, 5, 5))
        assert distance(img, Point3(5.2, 5, 5)) < 1e-12


class TestInverseLipschitz:
    def test_identity_gives_one(self):
        est = estimate_inverse_lipschitz(IdentityMap(), UNIT, 500, seed=0)
        assert est == pytest.approx(1.0)

    def test_deterministic_given_seed(self):
        cone = ConeMap(UNIT, Point3(0, 0, 0), Point3(0.3, 0.2, -0.1))
        a = estimate_inverse_lipschitz(cone, UNIT, 1000, seed=7)
        b = estimate_inverse_lipschitz(cone, UNIT, 1000, seed=7)
        assert a == b
        assert 0.0 < a < 1.0

    def test_rejects_tiny_sample(self):
        with pytest.raises(ValueError):
            estimate_inverse_lipschitz(IdentityMap(), UNIT, 1, seed=0)


@given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
@settings(max_examples=50, deadline=None)
def test_unsquish_parameter_maps_invert(c, t):
    m = UnsquishMap(_params(c), t)
    s = np.linspace(0.0, 1.0, 101)
    back = m._s_prime_inverse(m._s_prime(s))
    assert np.abs(back - s).max() < 1e-12


@given(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), st.floats(-0.8, 0.8))
@settings(max_examples=50, deadline=None)
def test_cone_map_bijective_on_random_targets(x, y, z):
    m = make_cone_map(UNIT, Point3(0, 0, 0), Point3(x, y, z))
    rng = np.random.default_rng(12)
    pts = UNIT.sample(rng, 200)
    assert roundtrip_error(m, pts) < 1e-9
