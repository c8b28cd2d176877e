"""Anisotropic three-terminal junctions and admissible direction pairs."""

import numpy as np
import pytest
from scipy.optimize import minimize as scipy_minimize

from anisoclusters import (
    Density,
    EllipseGauge,
    EuclideanGauge,
    LpGauge,
    RotatedGauge,
    ShiftedDiskGauge,
    admissible_pairs,
    fermat_modes_for_colors,
    fermat_point,
    junction_residual,
)
from anisoclusters.geometry import unit_dir

TERMINALS = np.array([[0.0, 0.0], [2.0, 0.2], [0.7, 1.8]])


def junction_cost(gauge, pts, modes, p):
    total = 0.0
    for x, mode in zip(pts, modes):
        if mode == "out":
            total += float(gauge.value(x - p))
        elif mode == "in":
            total += float(gauge.value(p - x))
        else:
            total += 0.5 * float(gauge.value(x - p) + gauge.value(p - x))
    return total


class TestFermatPoint:
    @pytest.mark.parametrize(
        "gauge",
        [
            EuclideanGauge(),
            EllipseGauge([[2.0, 0.3], [0.3, 1.0]]),
            ShiftedDiskGauge((0.2, -0.1), 1.0),
            LpGauge(3.0),
        ],
        ids=["euclid", "ellipse", "shifted", "lp3"],
    )
    @pytest.mark.parametrize("modes", [("out",) * 3, ("in",) * 3, ("sym",) * 3])
    def test_matches_derivative_free_minimizer(self, gauge, modes):
        res = fermat_point(gauge, *TERMINALS, modes=modes)
        ref = scipy_minimize(
            lambda p: junction_cost(gauge, TERMINALS, modes, p),
            TERMINALS.mean(axis=0),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
        )
        assert res.value == pytest.approx(ref.fun, abs=1e-9)
        assert np.linalg.norm(res.point - ref.x) < 1e-5

    def test_value_consistent_with_cost(self):
        gauge = ShiftedDiskGauge((0.0, 0.3), 1.0)
        modes = ("out", "in", "sym")
        res = fermat_point(gauge, *TERMINALS, modes=modes)
        assert res.value == pytest.approx(
            junction_cost(gauge, TERMINALS, modes, res.point), abs=1e-12
        )

    def test_asymmetric_gauge_breaks_mode_symmetry(self):
        gauge = ShiftedDiskGauge((0.0, 0.4), 1.0)
        out = fermat_point(gauge, *TERMINALS, modes=("out",) * 3)
        inn = fermat_point(gauge, *TERMINALS, modes=("in",) * 3)
        assert abs(out.value - inn.value) > 1e-3

    def test_euclidean_arms_meet_at_120_degrees(self):
        res = fermat_point(EuclideanGauge(), *TERMINALS)
        arms = TERMINALS - res.point
        arms /= np.linalg.norm(arms, axis=1)[:, None]
        for i in range(3):
            cosang = float(np.dot(arms[i], arms[(i + 1) % 3]))
            assert np.degrees(np.arccos(cosang)) == pytest.approx(120.0, abs=1e-4)

    def test_obtuse_triangle_snaps_to_vertex(self):
        res = fermat_point(
            EuclideanGauge(),
            np.array([0.0, 0.0]),
            np.array([1.0, 0.0]),
            np.array([-0.8, 0.3]),
        )
        assert res.degenerate_vertex == 0
        assert np.allclose(res.point, [0.0, 0.0])

    def test_collinear_flag(self):
        res = fermat_point(
            EuclideanGauge(),
            np.array([0.0, 0.0]),
            np.array([1.0, 0.0]),
            np.array([2.0, 0.0]),
        )
        assert res.collinear
        assert res.value == pytest.approx(2.0, abs=1e-12)

    def test_rotation_equivariance(self):
        base = EllipseGauge([[2.0, 0.3], [0.3, 1.0]])
        theta = 0.7
        R = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        res0 = fermat_point(base, *TERMINALS)
        res1 = fermat_point(RotatedGauge(base, theta), *(TERMINALS @ R.T))
        assert res1.value == pytest.approx(res0.value, rel=1e-8)
        assert np.linalg.norm(res1.point - R @ res0.point) < 1e-6

    def test_rejects_duplicate_terminals(self):
        with pytest.raises(ValueError):
            fermat_point(
                EuclideanGauge(),
                np.array([0.0, 0.0]),
                np.array([0.0, 0.0]),
                np.array([1.0, 1.0]),
            )

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            fermat_point(EuclideanGauge(), *TERMINALS, modes=("out", "out", "spin"))


class TestModesForColors:
    def test_all_colored_is_two_sided(self):
        modes, w = fermat_modes_for_colors([1, 2, 3])
        assert modes == ("sym", "sym", "sym")

    def test_white_sector_orients_bounding_arcs(self):
        assert fermat_modes_for_colors([0, 1, 2])[0] == ("out", "in", "sym")
        assert fermat_modes_for_colors([1, 0, 2])[0] == ("sym", "out", "in")
        assert fermat_modes_for_colors([1, 2, 0])[0] == ("in", "sym", "out")

    def test_two_whites_rejected(self):
        with pytest.raises(ValueError):
            fermat_modes_for_colors([0, 0, 1])


class TestJunctionResidual:
    def test_euclidean_120_is_stationary(self):
        dirs = unit_dir(np.radians([90.0, -30.0, -150.0]))
        r = junction_residual(
            Density.constant(EuclideanGauge()), np.zeros(2), dirs, [1, 2, 3]
        )
        assert np.linalg.norm(r) < 1e-12

    def test_perturbed_directions_are_not(self):
        dirs = unit_dir(np.radians([90.0, -25.0, -150.0]))
        r = junction_residual(
            Density.constant(EuclideanGauge()), np.zeros(2), dirs, [1, 2, 3]
        )
        assert np.linalg.norm(r) > 1e-3

    def test_accepts_plain_gauge(self):
        dirs = unit_dir(np.radians([90.0, -30.0, -150.0]))
        r = junction_residual(EuclideanGauge(), np.zeros(2), dirs, [1, 2, 3])
        assert np.linalg.norm(r) < 1e-12

    def test_counterclockwise_order_rejected(self):
        dirs = unit_dir(np.radians([-150.0, -30.0, 90.0]))
        with pytest.raises(ValueError):
            junction_residual(EuclideanGauge(), np.zeros(2), dirs, [1, 2, 3])

    def test_zero_direction_rejected(self):
        dirs = np.array([[0.0, 1.0], [0.0, 0.0], [-1.0, -1.0]])
        with pytest.raises(ValueError):
            junction_residual(EuclideanGauge(), np.zeros(2), dirs, [1, 2, 3])

    def test_two_whites_rejected(self):
        dirs = unit_dir(np.radians([90.0, -30.0, -150.0]))
        with pytest.raises(ValueError):
            junction_residual(EuclideanGauge(), np.zeros(2), dirs, [0, 0, 1])

    def test_wrong_direction_count_rejected(self):
        with pytest.raises(ValueError):
            junction_residual(
                EuclideanGauge(), np.zeros(2), unit_dir(np.radians([0.0, 90.0])), [1, 2]
            )


class TestAdmissiblePairs:
    def test_euclidean_unique_symmetric_pair(self):
        pairs = admissible_pairs(EuclideanGauge(), np.array([0.0, 1.0]), resolution=360)
        assert len(pairs) == 1
        t = pairs[0]
        assert np.degrees(t.angle_b) == pytest.approx(120.0, abs=0.01)
        assert np.degrees(t.angle_c) == pytest.approx(120.0, abs=0.01)
        assert t.residual < 1e-9

    def test_lp_pair_angle_matches_tangent_law(self):
        # symmetric pair at angle alpha from the reference direction with
        # tan(alpha) = -(2**q - 1)**(1/p), q the conjugate exponent
        for p in (1.5, 3.0):
            q = p / (p - 1.0)
            alpha = np.pi - np.arctan((2.0**q - 1.0) ** (1.0 / p))
            pairs = admissible_pairs(LpGauge(p), np.array([0.0, 1.0]), resolution=360)
            assert len(pairs) == 1
            t = pairs[0]
            assert t.angle_b == pytest.approx(alpha, abs=1e-3)
            assert t.angle_c == pytest.approx(alpha, abs=1e-3)

    def test_shifted_disk_has_none(self):
        # the ball shifted against the reference direction leaves no
        # stationary pair anywhere on the torus
        pairs = admissible_pairs(
            ShiftedDiskGauge((0.0, -0.5), 1.0), np.array([0.0, 0.5]), resolution=240
        )
        assert pairs == []

    def test_kinked_gauge_rejected(self):
        with pytest.raises(ValueError):
            admissible_pairs(LpGauge(np.inf), np.array([0.0, 1.0]))

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            admissible_pairs(EuclideanGauge(), np.zeros(2))

    def test_pair_directions_balance_distant_terminals(self):
        # placing terminals far out along an admissible triple's directions
        # must pull the junction back to the origin
        gauge = LpGauge(3.0)
        pairs = admissible_pairs(gauge, np.array([0.0, 1.0]), resolution=360)
        t = pairs[0]
        R = 50.0
        res = fermat_point(gauge, R * t.a, R * t.b, R * t.c)
        assert np.linalg.norm(res.point) < 1e-2
