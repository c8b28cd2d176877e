"""Slice configurations, competitor moves, and path shortcutting."""

import numpy as np
import pytest

from anisoclusters import (
    EllipseGauge,
    EuclideanGauge,
    LpGauge,
    ShiftedDiskGauge,
    SliceConfig,
    SmoothedL1Gauge,
    improve,
    move_chord,
    move_join_whites,
    oriented_weight,
    path_length_gauge,
    shortcut_path,
    slice_perimeter,
)
from anisoclusters.geometry import polyline_self_intersects, rotate_cw

from conftest import random_slice_config, star_polygon


class TestOrientedWeight:
    def setup_method(self):
        self.gauge = ShiftedDiskGauge((0.2, -0.1), 1.0)
        self.vec = np.array([0.7, 0.4])

    def test_same_label_is_free(self):
        assert oriented_weight(self.gauge, self.vec, 2, 2) == 0.0

    def test_white_on_right_uses_cw_normal(self):
        n = rotate_cw(self.vec)
        assert oriented_weight(self.gauge, self.vec, 1, 0) == pytest.approx(
            float(self.gauge.value(n))
        )

    def test_white_on_left_uses_ccw_normal(self):
        n = rotate_cw(self.vec)
        assert oriented_weight(self.gauge, self.vec, 0, 1) == pytest.approx(
            float(self.gauge.value(-n))
        )

    def test_interface_averages_both_sides(self):
        n = rotate_cw(self.vec)
        expect = 0.5 * float(self.gauge.value(n) + self.gauge.value(-n))
        assert oriented_weight(self.gauge, self.vec, 1, 2) == pytest.approx(expect)

    def test_asymmetry_shows_in_one_sided_weights(self):
        a = oriented_weight(self.gauge, self.vec, 1, 0)
        b = oriented_weight(self.gauge, self.vec, 0, 1)
        assert abs(a - b) > 1e-6


class TestSliceConfig:
    def test_perimeter_is_sum_of_radius_weights(self):
        gauge = EllipseGauge([[2.0, 0.3], [0.3, 1.0]])
        cfg = SliceConfig(np.radians([10, 80, 150, 220, 300]), [1, 2, 3, 4, 2], gauge)
        pts = cfg.points()
        expect = sum(
            oriented_weight(gauge, pts[i], cfg.colors[i], cfg.colors[i - 1])
            for i in range(cfg.n)
        )
        assert slice_perimeter(cfg) == pytest.approx(expect, abs=1e-12)

    def test_adjacent_whites_merge(self):
        cfg = SliceConfig(np.radians([0, 90, 180, 270]), [0, 0, 1, 2], EuclideanGauge())
        assert cfg.n == 3
        assert 0 in cfg.colors
        for i in range(cfg.n):
            assert not (cfg.colors[i] == 0 and cfg.colors[i - 1] == 0)

    def test_angles_come_out_sorted(self):
        cfg = SliceConfig(np.radians([300, 10, 150]), [1, 2, 3], EuclideanGauge())
        assert np.all(np.diff(cfg.angles) > 0)

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            SliceConfig(np.radians([0, 90]), [1], EuclideanGauge())

    def test_negative_colors_rejected(self):
        with pytest.raises(ValueError):
            SliceConfig(np.radians([0, 90]), [1, -2], EuclideanGauge())

    def test_duplicate_angles_rejected(self):
        with pytest.raises(ValueError):
            SliceConfig(np.radians([0, 0, 90]), [1, 2, 3], EuclideanGauge())

    def test_all_white_collapses(self):
        with pytest.raises(ValueError):
            SliceConfig(np.radians([0, 90, 180]), [0, 0, 0], EuclideanGauge())

    def test_spec_round_trips(self):
        cfg = SliceConfig(np.radians([10, 80, 150, 220]), [1, 2, 3, 4], EuclideanGauge())
        spec = cfg.spec()
        back = SliceConfig(np.radians(spec["angles_deg"]), spec["colors"], EuclideanGauge())
        assert np.allclose(back.angles, cfg.angles)
        assert back.colors == cfg.colors


class TestMoves:
    def test_moves_preserve_circle_trace(self):
        from anisoclusters.slices import enumerate_moves

        cfg = SliceConfig(
            np.radians([10, 80, 150, 220, 300]),
            [1, 2, 0, 3, 2],
            EuclideanGauge(),
        )
        base_trace = cfg.base_network().trace_angles()
        count = 0
        for desc, net in enumerate_moves(cfg):
            assert net.trace_angles() == base_trace, desc
            count += 1
        assert count > 5

    def test_chord_skips_wide_sectors(self):
        cfg = SliceConfig(np.radians([0, 90, 150]), [1, 2, 3], EuclideanGauge())
        # sector from 150 deg back to 0 deg spans 210 deg
        assert move_chord(cfg, 2) is None
        assert move_chord(cfg, 0) is not None

    def test_chord_cuts_euclidean_fan(self):
        # two radii 60 deg apart: chord replaces the far radius pattern;
        # compare against a hand-built competitor perimeter
        cfg = SliceConfig(np.radians([0, 60, 180, 240]), [1, 2, 1, 2], EuclideanGauge())
        net = move_chord(cfg, 0)
        assert net is not None
        assert net.perimeter() < cfg.perimeter()

    def test_join_whites_clips_interior_radii(self):
        cfg = SliceConfig(
            np.radians([0, 40, 80, 180, 300]), [1, 2, 0, 3, 0], EuclideanGauge()
        )
        net = move_join_whites(cfg, 0, 1)
        assert net is not None
        # pieces under the chord carry white on the outside
        whites = [s for s in net.segments if s.right == 0]
        assert len(whites) >= 2
        assert net.trace_angles() == cfg.base_network().trace_angles()

    def test_join_whites_needs_white_flanks(self):
        cfg = SliceConfig(
            np.radians([0, 40, 80, 180, 300]), [1, 2, 0, 3, 4], EuclideanGauge()
        )
        assert move_join_whites(cfg, 0, 1) is None

    def test_join_whites_skips_wide_spans(self):
        cfg = SliceConfig(
            np.radians([0, 170, 200, 300]), [1, 0, 2, 0], EuclideanGauge()
        )
        # span {0} covers 170 degrees; widen it past pi via the other span
        wide = SliceConfig(
            np.radians([0, 100, 200, 250, 300]), [1, 2, 0, 3, 0], EuclideanGauge()
        )
        assert move_join_whites(wide, 0, 1) is None


class TestImprove:
    def test_needs_more_than_three_radii(self):
        cfg = SliceConfig(np.radians([0, 120, 240]), [1, 2, 3], EuclideanGauge())
        with pytest.raises(ValueError):
            improve(cfg)

    def test_report_is_self_consistent(self):
        cfg = SliceConfig(
            np.radians([10, 80, 150, 220, 300]), [1, 2, 0, 3, 2], EuclideanGauge()
        )
        res = improve(cfg)
        assert res.perimeter_before == pytest.approx(cfg.perimeter(), abs=1e-12)
        assert res.perimeter_after == pytest.approx(
            res.network.perimeter(), abs=1e-12
        )
        assert res.delta == pytest.approx(
            res.perimeter_before - res.perimeter_after, abs=1e-12
        )

    @pytest.mark.parametrize(
        "gauge",
        [EuclideanGauge(), EllipseGauge([[2.0, 0.3], [0.3, 1.0]])],
        ids=["euclid", "ellipse"],
    )
    def test_strictly_convex_sweep_always_improves(self, gauge):
        rng = np.random.default_rng(5150)
        for _ in range(50):
            cfg = random_slice_config(rng, gauge)
            res = improve(cfg)
            assert res.delta > 0, cfg.spec()
            assert res.guaranteed

    def test_smoothed_l1_improves_without_guarantee(self):
        rng = np.random.default_rng(99)
        gauge = SmoothedL1Gauge(0.35)
        cfg = random_slice_config(rng, gauge)
        res = improve(cfg)
        assert res.delta > 0
        assert not res.guaranteed

    def test_max_norm_cross_is_already_optimal(self):
        cfg = SliceConfig(
            np.radians([45, 135, 225, 315]), [1, 2, 3, 4], LpGauge(np.inf)
        )
        res = improve(cfg)
        assert res.delta <= 1e-12
        assert not res.guaranteed


class TestPathLength:
    def test_reverse_matters_for_asymmetric_gauge(self):
        gauge = ShiftedDiskGauge((0.2, -0.1), 1.0)
        pts = np.array([[0.0, 0.0], [1.0, 0.5], [2.0, 0.0]])
        fwd = path_length_gauge(gauge, pts)
        rev = path_length_gauge(gauge, pts, reverse=True)
        assert abs(fwd - rev) > 1e-6
        assert rev == pytest.approx(path_length_gauge(gauge, pts[::-1]), abs=1e-12)

    def test_symmetric_gauge_is_direction_blind(self):
        gauge = EllipseGauge([[2.0, 0.3], [0.3, 1.0]])
        pts = np.array([[0.0, 0.0], [1.0, 0.5], [2.0, 0.0]])
        assert path_length_gauge(gauge, pts) == pytest.approx(
            path_length_gauge(gauge, pts, reverse=True), abs=1e-12
        )

    @pytest.mark.parametrize(
        "gauge",
        [EuclideanGauge(), LpGauge(3.0), ShiftedDiskGauge((0.2, -0.1), 1.0)],
        ids=["euclid", "lp3", "shifted"],
    )
    def test_path_at_least_chord(self, gauge):
        rng = np.random.default_rng(31)
        for _ in range(100):
            pts = rng.normal(size=(6, 2))
            path = path_length_gauge(gauge, pts)
            chord = float(gauge.value(pts[-1] - pts[0]))
            assert path >= chord - 1e-12


class TestShortcut:
    def test_straightens_a_convex_bulge(self):
        tau1 = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        tau2 = np.array([[2.0, 0.0], [1.0, -0.2], [0.0, 0.0]])
        tau = shortcut_path(tau1, tau2)
        assert np.allclose(tau[0], tau1[0])
        assert np.allclose(tau[-1], tau1[-1])
        g = EuclideanGauge()
        two_sided = path_length_gauge(g, tau) + path_length_gauge(g, tau, reverse=True)
        total = path_length_gauge(g, tau1) + path_length_gauge(g, tau2)
        assert two_sided <= total + 1e-12

    def test_random_star_splits_never_lose(self):
        rng = np.random.default_rng(2718)
        gauges = [
            EuclideanGauge(),
            EllipseGauge([[2.0, 0.3], [0.3, 1.0]]),
            ShiftedDiskGauge((0.2, -0.1), 1.0),
        ]
        for trial in range(50):
            poly = star_polygon(rng, int(rng.integers(6, 14)))
            k = int(rng.integers(2, len(poly) - 1))
            tau1 = poly[: k + 1]
            tau2 = np.vstack([poly[k:], poly[:1]])
            tau = shortcut_path(tau1, tau2)
            assert np.allclose(tau[0], tau1[0]) and np.allclose(tau[-1], tau1[-1])
            assert not polyline_self_intersects(tau)
            g = gauges[trial % len(gauges)]
            two_sided = path_length_gauge(g, tau) + path_length_gauge(
                g, tau, reverse=True
            )
            total = path_length_gauge(g, tau1) + path_length_gauge(g, tau2)
            assert two_sided <= total + 1e-12, trial

    def test_endpoint_mismatch_rejected(self):
        tau1 = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        tau2 = np.array([[2.0, 0.0], [1.0, -0.2], [0.5, 0.0]])
        with pytest.raises(ValueError):
            shortcut_path(tau1, tau2)

    def test_crossing_chains_rejected(self):
        tau1 = np.array([[0.0, 0.0], [2.0, 1.0], [2.0, 0.0]])
        tau2 = np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            shortcut_path(tau1, tau2)

    def test_short_chain_rejected(self):
        with pytest.raises(ValueError):
            shortcut_path(np.array([[0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]]))
