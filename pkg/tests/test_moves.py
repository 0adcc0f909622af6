import numpy as np
import pytest

from knotiso.canonical import (
    CANONICAL_BOX,
    KINK_CROSSINGS,
    conjugated_insert,
    kink_isotopy,
    kink_map,
    loop_sub_boxes,
    multi_kink_isotopy,
    multi_kink_map,
)
from knotiso.diagram import count_crossings
from knotiso.geometry import Box, PLCurve, Point3, curve_is_simple, distance
from knotiso.maps import (
    AffineMap,
    IdentityMap,
    UnsquishParams,
    roundtrip_error,
)
from knotiso.moves import (
    ConeStage,
    chained_isotopy,
    cone_isotopy,
    conjugated_isotopy,
    reversed_isotopy,
    staged_isotopy,
    unsquish_isotopy,
)

UNIT = CANONICAL_BOX


def _strand(n: int = 400) -> PLCurve:
    xs = np.linspace(-1.0, 1.0, n)
    return PLCurve(tuple(Point3(float(x), 0.0, 0.0) for x in xs))


def _image(iso, t: float, curve: PLCurve) -> PLCurve:
    pts = iso.map_at(t).apply_array(curve.as_array())
    return PLCurve(tuple(Point3.from_array(p) for p in pts), closed=curve.closed)


class TestConeIsotopy:
    def test_endpoints(self):
        iso = cone_isotopy(UNIT, Point3(0, 0, 0), Point3(0.4, 0.2, 0.0))
        assert distance(iso.eval(0.0, Point3(0, 0, 0)), Point3(0, 0, 0)) < 1e-12
        assert distance(iso.eval(1.0, Point3(0, 0, 0)), Point3(0.4, 0.2, 0.0)) < 1e-12

    def test_apex_moves_linearly(self):
        iso = cone_isotopy(UNIT, Point3(0, 0, 0), Point3(0.4, 0.2, 0.0))
        mid = iso.eval(0.5, Point3(0, 0, 0))
        assert distance(mid, Point3(0.2, 0.1, 0.0)) < 1e-12

    def test_validates_targets(self):
        with pytest.raises(ValueError):
            cone_isotopy(UNIT, Point3(0, 0, 0), Point3(2, 0, 0))


class TestStagedAndChained:
    def test_staged_runs_stages_in_sequence(self):
        stages = [
            ConeStage(UNIT, Point3(0, 0, 0), Point3(0.3, 0, 0)),
            ConeStage(UNIT, Point3(0.3, 0, 0), Point3(0.3, 0.3, 0)),
        ]
        iso = staged_isotopy(stages, UNIT)
        # at t = 0.5 exactly the first stage has finished
        assert distance(iso.eval(0.5, Point3(0, 0, 0)), Point3(0.3, 0, 0)) < 1e-12
        assert distance(iso.eval(1.0, Point3(0, 0, 0)), Point3(0.3, 0.3, 0)) < 1e-12

    def test_empty_stages_rejected(self):
        with pytest.raises(ValueError):
            staged_isotopy([], UNIT)
        with pytest.raises(ValueError):
            chained_isotopy([], UNIT)

    def test_chained_matches_parts(self):
        a = cone_isotopy(UNIT, Point3(0, 0, 0), Point3(0.3, 0, 0))
        b = unsquish_isotopy(
            UnsquishParams(
                outer=UNIT,
                inner=UNIT.scaled_about_center(0.5),
                apex=Point3(0.1, 0, 0),
                c=0.5,
            )
        )
        chain = chained_isotopy([a, b], UNIT)
        rng = np.random.default_rng(0)
        pts = UNIT.sample(rng, 500)
        end = b.time_one().apply_array(a.time_one().apply_array(pts))
        assert np.abs(chain.time_one().apply_array(pts) - end).max() < 1e-12
        # halfway through: first part done, second not started
        assert np.abs(chain.map_at(0.5).apply_array(pts) - a.time_one().apply_array(pts)).max() < 1e-12

    def test_chained_identity_at_zero(self):
        a = cone_isotopy(UNIT, Point3(0, 0, 0), Point3(0.3, 0, 0))
        chain = chained_isotopy([a], UNIT)
        assert isinstance(chain.map_at(0.0), IdentityMap)


class TestConjugatedIsotopy:
    def test_exact_identity_at_zero(self):
        target = Box.cube(Point3(3, 0, 0), 0.5)
        frame = AffineMap.box_to_box(UNIT, target)
        iso = conjugated_isotopy(frame, kink_isotopy(), target)
        assert isinstance(iso.map_at(0.0), IdentityMap)

    def test_supported_in_target(self):
        target = Box.cube(Point3(3, 0, 0), 0.5)
        frame = AffineMap.box_to_box(UNIT, target)
        iso = conjugated_isotopy(frame, kink_isotopy(), target)
        rng = np.random.default_rng(1)
        pts = Box.cube(Point3(0, 0, 0), 2.0).sample(rng, 500)  # far from target
        for t in (0.25, 0.6, 1.0):
            assert np.abs(iso.map_at(t).apply_array(pts) - pts).max() < 1e-12


class TestReversedIsotopy:
    def test_undoes_exactly(self):
        fwd = kink_isotopy()
        rev = reversed_isotopy(fwd)
        rng = np.random.default_rng(2)
        pts = UNIT.sample(rng, 500)
        tied = fwd.time_one().apply_array(pts)
        untied = rev.time_one().apply_array(tied)
        assert np.abs(untied - pts).max() < 1e-9

    def test_identity_at_zero(self):
        rev = reversed_isotopy(kink_isotopy())
        assert isinstance(rev.map_at(0.0), IdentityMap)

    def test_midway_is_partial_rewind(self):
        fwd = cone_isotopy(UNIT, Point3(0, 0, 0), Point3(0.4, 0, 0))
        rev = reversed_isotopy(fwd)
        # rev at time t maps fwd-at-1 state to fwd-at-(1-t) state
        tied = fwd.time_one().apply(Point3(0, 0, 0))
        half = rev.eval(0.5, tied)
        assert distance(half, fwd.eval(0.5, Point3(0, 0, 0))) < 1e-12


class TestUnsquishIsotopy:
    def test_identity_at_zero_and_invertible(self):
        params = UnsquishParams(
            outer=UNIT,
            inner=UNIT.scaled_about_center(0.5),
            apex=Point3(0, 0, 0),
            c=0.4,
        )
        iso = unsquish_isotopy(params)
        rng = np.random.default_rng(3)
        pts = UNIT.sample(rng, 500)
        assert np.abs(iso.map_at(0.0).apply_array(pts) - pts).max() < 1e-12
        assert roundtrip_error(iso.time_one(), pts) < 1e-9


class TestCanonicalKink:
    def test_single_kink_one_crossing(self):
        curve = _image(kink_isotopy(), 1.0, _strand())
        assert count_crossings(curve) == KINK_CROSSINGS
        assert curve_is_simple(curve, 1e-9)

    def test_kink_crossing_margin(self):
        from knotiso.diagram import find_crossings

        curve = _image(kink_isotopy(), 1.0, _strand())
        (c,) = find_crossings(curve)
        assert c.z_over - c.z_under > 0.25

    def test_kink_map_matches_isotopy_end(self):
        rng = np.random.default_rng(4)
        pts = UNIT.sample(rng, 500)
        a = kink_map().apply_array(pts)
        b = kink_isotopy().time_one().apply_array(pts)
        assert np.abs(a - b).max() < 1e-12

    def test_kink_fixes_box_exterior(self):
        rng = np.random.default_rng(5)
        pts = rng.uniform(1.5, 4.0, (500, 3)) * rng.choice([-1, 1], (500, 3))
        assert np.array_equal(kink_map().apply_array(pts), pts)

    def test_intermediate_times_stay_simple(self):
        iso = kink_isotopy()
        for t in (0.2, 0.5, 0.8):
            assert curve_is_simple(_image(iso, t, _strand()), 1e-9)


class TestMultiKink:
    def test_sub_boxes_disjoint_and_inside(self):
        for m in (2, 3, 5):
            subs = loop_sub_boxes(m)
            assert len(subs) == m
            for b in subs:
                assert CANONICAL_BOX.contains_box(b)
            for i in range(m):
                for j in range(i + 1, m):
                    assert not subs[i].intersects(subs[j])
        with pytest.raises(ValueError):
            loop_sub_boxes(0)

    @pytest.mark.parametrize("m", [2, 3])
    def test_m_kinks_m_crossings(self, m):
        curve = _image(multi_kink_isotopy(m), 1.0, _strand(900))
        assert count_crossings(curve) == m * KINK_CROSSINGS
        assert curve_is_simple(curve, 1e-9)

    def test_multi_kink_map_matches_isotopy_end(self):
        rng = np.random.default_rng(6)
        pts = UNIT.sample(rng, 500)
        a = multi_kink_map(3).apply_array(pts)
        b = multi_kink_isotopy(3).time_one().apply_array(pts)
        assert np.abs(a - b).max() < 1e-12


class TestConjugatedInsert:
    def test_crossing_transfers_to_target_box(self):
        target = Box.from_center(Point3(2, 0, 0), Point3(0.1, 0.05, 0.05))
        iso = conjugated_insert(target)
        xs = np.linspace(target.lo.x, target.hi.x, 400)
        strand = PLCurve(tuple(Point3(float(x), 0.0, 0.0) for x in xs))
        curve = _image(iso, 1.0, strand)
        assert count_crossings(curve) == 1
        assert curve_is_simple(curve, 1e-9)

    def test_pair_insert_two_crossings(self):
        target = Box.from_center(Point3(2, 0, 0), Point3(0.1, 0.05, 0.05))
        iso = conjugated_insert(target, m=2)
        xs = np.linspace(target.lo.x, target.hi.x, 800)
        strand = PLCurve(tuple(Point3(float(x), 0.0, 0.0) for x in xs))
        assert count_crossings(_image(iso, 1.0, strand)) == 2
