"""Cluster data structure, weighted perimeter/volume, and diagnostics."""

import numpy as np
import pytest

from anisoclusters import (
    Cluster,
    Density,
    Edge,
    EllipseGauge,
    EuclideanGauge,
    LpGauge,
    Rect,
    chamber_perimeter,
    double_bubble_cluster,
    growth_estimate,
    isoperimetric_check,
    perimeter_breakdown,
    polygon_chamber,
    regular_polygon_chamber,
    relative_perimeter,
    resample_cluster,
    square_cross_cluster,
    union_perimeter,
    validate,
    weighted_perimeter,
    weighted_volume,
    weighted_volume_plain,
)


def unit_disk_polygon(n=512):
    t = np.arange(n) * (2 * np.pi / n)
    return np.column_stack([np.cos(t), np.sin(t)])


class TestCrossUnderMaxNorm:
    """The axis-aligned cross partition of a square is exactly computable."""

    def setup_method(self):
        self.cluster = square_cross_cluster(n_sub=4)
        self.density = Density.constant(LpGauge(np.inf))

    def test_total_perimeter(self):
        # outer square contributes 8, the four interior arms (counted with
        # the symmetrized two-sided weight) contribute 4
        assert weighted_perimeter(self.cluster, self.density) == pytest.approx(12.0, abs=1e-12)

    def test_breakdown_sums_to_total(self):
        parts = perimeter_breakdown(self.cluster, self.density)
        assert len(parts) == len(self.cluster.edges)
        assert parts.sum() == pytest.approx(weighted_perimeter(self.cluster, self.density))

    def test_chamber_volumes(self):
        vols = weighted_volume(self.cluster, self.density)
        assert vols == pytest.approx(np.ones(4), abs=1e-12)
        assert weighted_volume_plain(self.cluster) == pytest.approx(np.ones(4), abs=1e-12)

    def test_relative_perimeter_clips_to_disk(self):
        # a radius-1/2 disk at the center meets only the four diagonal arms,
        # each clipped to length 1/2 with two-sided max-norm weight 1/sqrt(2)
        got = relative_perimeter(self.cluster, self.density, np.zeros(2), 0.5)
        assert got == pytest.approx(np.sqrt(2.0), abs=1e-12)

    def test_chamber_and_union_perimeter(self):
        # chambers are corner triangles: one side of length 2 plus two
        # half-diagonals of length sqrt(2)
        eu = Density.constant(EuclideanGauge())
        for label in range(1, 5):
            assert chamber_perimeter(self.cluster, eu, label) == pytest.approx(
                2.0 + 2.0 * np.sqrt(2.0), abs=1e-12
            )
        assert union_perimeter(self.cluster, eu) == pytest.approx(8.0, abs=1e-12)


class TestSingleChamber:
    def test_unit_square_perimeter_and_area(self):
        square = polygon_chamber(np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]]))
        d = Density.constant(EuclideanGauge())
        assert weighted_perimeter(square, d) == pytest.approx(4.0, abs=1e-12)
        assert weighted_volume(square, d) == pytest.approx([1.0], abs=1e-12)

    def test_regular_polygon_hits_target_area(self):
        poly = regular_polygon_chamber(128, area=np.pi)
        d = Density.constant(EuclideanGauge())
        assert weighted_volume(poly, d)[0] == pytest.approx(np.pi, rel=1e-12)
        # perimeter of a 128-gon of area pi is just above 2 pi
        P = weighted_perimeter(poly, d)
        assert 2 * np.pi < P < 2 * np.pi * 1.001

    def test_asymmetric_gauge_sides_differ(self):
        # one chamber traversed ccw: exterior weight uses the outward normal
        square = polygon_chamber(np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]]))
        from anisoclusters import ShiftedDiskGauge

        d = Density.constant(ShiftedDiskGauge((0.0, 0.4), 1.0))
        P = weighted_perimeter(square, d)
        g = d.gauge_at(np.zeros(2))
        expect = sum(
            g.value(np.array(n, dtype=float))
            for n in [(0, -1), (1, 0), (0, 1), (-1, 0)]
        )
        assert P == pytest.approx(expect, rel=1e-12)

    def test_subdivision_invariance_constant_density(self):
        cl = double_bubble_cluster(n_arc=12, n_mid=4)
        d = Density.constant(EllipseGauge([[2.0, 0.3], [0.3, 1.0]]))
        p1 = weighted_perimeter(cl, d, subdiv=1)
        p3 = weighted_perimeter(cl, d, subdiv=3)
        assert p3 == pytest.approx(p1, rel=1e-12)

    def test_variable_g_volume(self):
        # g(x, y) = 1 + x over the unit square: integral is 3/2
        square = polygon_chamber(np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]]))
        d = Density(EuclideanGauge(), g=lambda p: 1.0 + p[..., 0])
        assert weighted_volume(square, d)[0] == pytest.approx(1.5, rel=1e-12)


class TestSpecRoundTrip:
    def test_round_trip_preserves_everything(self):
        cl = square_cross_cluster(n_sub=3, jitter=0.05, rng=np.random.default_rng(3))
        cl.edges[0].tags["wall"] = True
        spec = cl.spec()
        back = Cluster.from_spec(spec)
        assert np.allclose(back.vertices, cl.vertices)
        assert back.m == cl.m
        assert len(back.edges) == len(cl.edges)
        for a, b in zip(back.edges, cl.edges):
            assert a.vertices == list(b.vertices)
            assert (a.left, a.right) == (b.left, b.right)
            assert a.tags == b.tags

    def test_copy_is_deep(self):
        cl = square_cross_cluster(n_sub=2)
        cp = cl.copy()
        cp.vertices[0] += 10.0
        cp.edges[0].tags["probe"] = True
        assert not np.allclose(cl.vertices[0], cp.vertices[0])
        assert "probe" not in cl.edges[0].tags


class TestValidate:
    def test_clean_clusters_pass(self):
        for cl in (
            square_cross_cluster(n_sub=4),
            double_bubble_cluster(n_arc=16, n_mid=6),
            regular_polygon_chamber(32),
        ):
            assert validate(cl) == []

    def test_repeated_vertex_flagged(self):
        cl = Cluster(
            [[0.0, 0], [1, 0], [1, 1]],
            [Edge([0, 1, 1, 2, 0], 1, 0)],
            1,
        )
        assert any("repeated" in p for p in validate(cl))

    def test_label_out_of_range(self):
        cl = Cluster([[0.0, 0], [1, 0], [0, 1]], [Edge([0, 1, 2, 0], 5, 0)], 1)
        assert any("label" in p for p in validate(cl))

    def test_equal_labels(self):
        cl = Cluster([[0.0, 0], [1, 0], [0, 1]], [Edge([0, 1, 2, 0], 1, 1)], 1)
        assert any("equal labels" in p for p in validate(cl))

    def test_clockwise_chamber_is_nonpositive_area(self):
        cl = Cluster([[0.0, 0], [0, 1], [1, 0]], [Edge([0, 1, 2, 0], 1, 0)], 1)
        assert any("nonpositive area" in p for p in validate(cl))

    def test_crossing_edges_flagged(self):
        cl = Cluster(
            [[0.0, 0], [2, 2], [0, 2], [2, 0]],
            [Edge([0, 1], 1, 0), Edge([2, 3], 0, 1)],
            1,
        )
        probs = validate(cl)
        assert any("cross" in p for p in probs)

    def test_vertex_index_out_of_range(self):
        cl = Cluster([[0.0, 0], [1, 0]], [Edge([0, 7], 1, 0)], 1)
        assert any("out of range" in p for p in validate(cl))


class TestResample:
    def test_perimeter_never_increases(self):
        d = Density.constant(EuclideanGauge())
        cl = double_bubble_cluster(n_arc=40, n_mid=12)
        for target in (0.05, 0.15, 0.5):
            rs = resample_cluster(cl, target)
            assert weighted_perimeter(rs, d) <= weighted_perimeter(cl, d) + 1e-12

    def test_junction_positions_and_labels_survive(self):
        cl = double_bubble_cluster(n_arc=24, n_mid=8)
        deg = cl.vertex_degrees()
        junctions = np.sort(cl.vertices[deg >= 3], axis=0)
        rs = resample_cluster(cl, 0.08)
        deg2 = rs.vertex_degrees()
        junctions2 = np.sort(rs.vertices[deg2 >= 3], axis=0)
        assert np.allclose(junctions, junctions2)
        assert [(e.left, e.right) for e in rs.edges] == [
            (e.left, e.right) for e in cl.edges
        ]
        assert validate(rs) == []

    def test_wall_edges_verbatim(self):
        cl = square_cross_cluster(n_sub=6)
        for e in cl.edges:
            if 0 in (e.left, e.right):
                e.tags["wall"] = True
        rs = resample_cluster(cl, 10.0)
        for e0, e1 in zip(cl.edges, rs.edges):
            if e0.tags.get("wall"):
                assert np.allclose(
                    cl.vertices[np.asarray(e0.vertices)],
                    rs.vertices[np.asarray(e1.vertices)],
                )

    def test_segment_count_tracks_target(self):
        cl = regular_polygon_chamber(16, area=np.pi)
        rs = resample_cluster(cl, 0.05)
        i0, _, _, _, _ = rs.segment_index_arrays()
        # circumference about 2 pi, so about 125 segments
        assert 100 <= len(i0) <= 150


class TestIsoperimetricBound:
    def test_disk_satisfies_bound(self):
        d = Density.constant(EuclideanGauge())
        ok, slack = isoperimetric_check(unit_disk_polygon(), d, c_vol=np.pi, eta=2.0)
        assert ok
        # rhs = (1 / sqrt(pi)) * sqrt(pi) = 1 for the unit disk
        assert slack == pytest.approx(2 * np.pi - 1.0, rel=1e-3)

    def test_slack_scales_linearly(self):
        d = Density.constant(EllipseGauge([[2.0, 0.3], [0.3, 1.0]]))
        poly = unit_disk_polygon(256)
        _, s1 = isoperimetric_check(poly, d, c_vol=4.0, eta=2.0)
        _, s2 = isoperimetric_check(3.0 * poly, d, c_vol=4.0, eta=2.0)
        assert s2 == pytest.approx(3.0 * s1, rel=1e-9)

    def test_growth_fit_recovers_euclidean_ball_law(self):
        d = Density.constant(EuclideanGauge(), domain=Rect(-2, 2, -2, 2))
        c_vol, eta = growth_estimate(
            d, [0.1, 0.2, 0.4], rng=np.random.default_rng(11)
        )
        assert eta == pytest.approx(2.0, abs=0.05)
        assert c_vol == pytest.approx(np.pi, rel=0.05)

    def test_growth_fit_needs_three_radii(self):
        d = Density.constant(EuclideanGauge(), domain=Rect(-2, 2, -2, 2))
        with pytest.raises(ValueError):
            growth_estimate(d, [0.1, 0.2])


class TestConstructorErrors:
    def test_bad_vertex_shape(self):
        with pytest.raises(ValueError):
            Cluster(np.zeros((4, 3)), [], 1)

    def test_empty_cluster_is_fine(self):
        cl = Cluster(np.zeros((0, 2)), [], 0)
        d = Density.constant(EuclideanGauge())
        assert weighted_perimeter(cl, d) == 0.0
        assert weighted_volume(cl, d).shape == (0,)
