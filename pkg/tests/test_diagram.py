import math

import numpy as np
import pytest

from knotiso.diagram import count_crossings, find_crossings, render_svg
from knotiso.geometry import Box, PLCurve, Point3


def _poly(rows, closed=False) -> PLCurve:
    return PLCurve(tuple(Point3(*r) for r in rows), closed=closed)


class TestFindCrossings:
    def test_no_crossings_on_flat_ring(self):
        t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        ring = _poly([(math.cos(x), math.sin(x), 0.0) for x in t], closed=True)
        assert find_crossings(ring) == []

    def test_single_overpass(self):
        c = _poly([(-1, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 1), (0, -1, 1)])
        cs = find_crossings(c)
        assert len(cs) == 1
        (x,) = cs
        assert x.z_over == pytest.approx(1.0)
        assert x.z_under == pytest.approx(0.0)
        assert x.xy == pytest.approx((0.0, 0.0))
        assert x.seg_over == 3 and x.seg_under == 0

    def test_adjacent_segments_not_counted(self):
        c = _poly([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], closed=True)
        assert find_crossings(c) == []

    def test_tangent_strands_resolved_by_perturbation(self):
        # two strands touching in projection but separated in z would be
        # degenerate; crossing exactly over a vertex triggers the fallback
        c = _poly([(-1, 0, 0), (0, 0, 0), (1, 0, 0), (1, 1, 1), (0, 1, 1), (0, -1, 1)])
        cs = find_crossings(c)
        assert len(cs) == 1

    def test_true_intersection_in_3_space_raises(self):
        c = _poly([(-1, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, -1, 0)])
        with pytest.raises(ValueError):
            find_crossings(c)

    def test_closed_wraparound_pair_excluded(self):
        t = np.linspace(0, 2 * np.pi, 17, endpoint=False)
        ring = _poly([(math.cos(x), math.sin(x), 0.0) for x in t], closed=True)
        assert count_crossings(ring) == 0


class TestCandidatePruning:
    def test_large_multiscale_curve_matches_brute_force(self):
        # crossing pattern repeated at shrinking scales; > 1200 segments
        # forces the KD-tree path, compare against the O(n^2) brute count
        rows = []
        x0 = 0.0
        for k in range(6):
            s = 2.0**-k
            rows += [
                (x0, 0.0, 0.0),
                (x0 + 0.4 * s, 0.0, 0.0),
                (x0 + 0.4 * s, 0.3 * s, 0.0),
                (x0 + 0.2 * s, 0.3 * s, 0.1 * s),
                (x0 + 0.2 * s, -0.3 * s, 0.1 * s),
                (x0 + 0.6 * s, -0.3 * s, 0.0),
            ]
            x0 += 0.7 * s
        rows.append((x0 + 0.5, 0.0, 0.0))
        curve = _poly(rows)
        dense = curve.densified(0.002)
        assert dense.n_segments > 1200
        sparse_count = count_crossings(curve)  # brute-force path
        dense_count = count_crossings(dense)  # pruned path
        assert sparse_count == dense_count == 6

    def test_region_restriction(self):
        rows = []
        x0 = 0.0
        for k in range(3):
            rows += [
                (x0, 0.0, 0.0),
                (x0 + 0.4, 0.0, 0.0),
                (x0 + 0.4, 0.3, 0.0),
                (x0 + 0.2, 0.3, 0.1),
                (x0 + 0.2, -0.3, 0.1),
                (x0 + 0.6, -0.3, 0.0),
            ]
            x0 += 0.7
        curve = _poly(rows)
        total = count_crossings(curve)
        first = count_crossings(curve, Box(Point3(0, -1, -1), Point3(0.65, 1, 1)))
        assert total == 3
        assert first == 1


class TestRenderSvg:
    def test_well_formed_and_gapped(self):
        c = _poly([(-1, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 1), (0, -1, 1)])
        svg = render_svg(c)
        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        # the under strand is split by the gap: more line elements than segments
        assert svg.count("<line") == c.n_segments + 1

    def test_no_crossings_no_gaps(self):
        c = _poly([(0, 0, 0), (1, 0, 0), (1, 1, 0)])
        svg = render_svg(c)
        assert svg.count("<line") == c.n_segments
