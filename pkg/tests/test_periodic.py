import numpy as np
import pytest

from outerlength import periodic as pd
from outerlength import polygons as pg
from outerlength.errors import ChordDomainError
from outerlength.genfun import ChordConfig
from outerlength.oval import perturbed_circle

TWO_PI = 2.0 * np.pi


class TestTotalAction:
    def test_circle_square(self, round_table):
        angles = [0.0, np.pi / 2, np.pi, 3 * np.pi / 2]
        assert pd.total_action(round_table, angles) == pytest.approx(
            8.0 - TWO_PI, abs=1e-12
        )

    def test_circle_equilateral(self, round_table):
        angles = [0.0, TWO_PI / 3, 2 * TWO_PI / 3]
        assert pd.total_action(round_table, angles) == pytest.approx(
            6 * np.sqrt(3) - TWO_PI, abs=1e-12
        )

    def test_matches_polygon_perimeter(self, wobble3_table):
        # circumscribed polygon from tangency angles: support values p(alpha_i)
        rng = np.random.default_rng(21)
        for _ in range(10):
            gaps = rng.uniform(0.5, 1.5, 5)
            gaps *= TWO_PI / np.sum(gaps)
            start = rng.uniform(0, TWO_PI)
            angles = start + np.concatenate([[0.0], np.cumsum(gaps[:-1])])
            action = pd.total_action(wobble3_table, angles)
            poly = pg.PolygonConfig(angles, wobble3_table.p(angles))
            assert action + wobble3_table.circumference == pytest.approx(
                pg.perimeter(poly), abs=1e-10
            )

    def test_gap_violation_rejected(self, round_table):
        with pytest.raises(ChordDomainError):
            pd.total_action(round_table, [0.0, 0.5, 1.0])  # wrap gap > pi


class TestFindPeriodic:
    def test_circle_triangle(self, round_table):
        orb = pd.find_periodic(round_table, 3)
        assert orb.perimeter == pytest.approx(6 * np.sqrt(3), abs=1e-9)
        assert orb.residual < 1e-11
        gaps = np.diff(np.append(orb.angles, orb.angles[0] + TWO_PI))
        assert np.allclose(gaps, TWO_PI / 3, atol=1e-10)

    def test_circle_square(self, round_table):
        orb = pd.find_periodic(round_table, 4)
        assert orb.perimeter == pytest.approx(8.0, abs=1e-12)

    def test_circle_pentagram(self, round_table):
        orb = pd.find_periodic(round_table, 5, m=2)
        gaps = np.diff(np.append(orb.angles, orb.angles[0] + 2 * TWO_PI))
        assert np.allclose(gaps, 2 * TWO_PI / 5, atol=1e-10)
        assert orb.perimeter == pytest.approx(10 * np.tan(2 * np.pi / 5), abs=1e-9)

    def test_orbit_closes_under_map(self, round_table, wobble3_table):
        for oval, n in ((round_table, 3), (wobble3_table, 3), (wobble3_table, 4)):
            orb = pd.find_periodic(oval, n)
            assert pd.closure_by_iteration(oval, orb.angles, orb.m) < 1e-8

    def test_ellipse_four_orbit_is_parallelogram(self, ellipse_table):
        orb = pd.find_periodic(ellipse_table, 4)
        a = orb.angles
        assert a[2] - a[0] == pytest.approx(np.pi, abs=1e-9)
        assert a[3] - a[1] == pytest.approx(np.pi, abs=1e-9)
        p = ellipse_table.p(a)
        assert p[0] == pytest.approx(p[2], abs=1e-9)
        assert p[1] == pytest.approx(p[3], abs=1e-9)
        # circumscribed 4-periodic orbits about (a, b) have perimeter 4(a + b)
        assert orb.perimeter == pytest.approx(
            4 * (np.sin(0.8) + np.cos(0.8)), abs=1e-8
        )

    def test_forge_table_four_orbit_on_family(self, forge_table):
        oval, family = forge_table
        orb = pd.find_periodic(oval, 4)
        assert orb.perimeter == pytest.approx(4.0, abs=1e-9)
        # orbit angles must sit on the invariant family: same chord data
        s = family.state((orb.angles[0] + orb.angles[1]) / 2.0)
        assert s.alpha1 == pytest.approx(orb.angles[0], abs=1e-8)
        assert s.alpha2 == pytest.approx(orb.angles[1], abs=1e-8)

    def test_seed_validation(self, round_table):
        with pytest.raises(ValueError):
            pd.find_periodic(round_table, 2)
        with pytest.raises(ValueError):
            pd.find_periodic(round_table, 6, m=2)
        with pytest.raises(ValueError):
            pd.find_periodic(round_table, 3, m=2)  # mean gap >= pi

    def test_normalization_deterministic(self, round_table):
        seed = np.array([1.2, 1.2 + TWO_PI / 3, 1.2 + 2 * TWO_PI / 3])
        orb = pd.find_periodic(round_table, 3, seed_angles=seed)
        assert 0.0 <= orb.angles[0] < TWO_PI / 3 + 1e-9


class TestBruteOracle:
    def test_circle_triangle_agrees(self, round_table):
        newton = pd.find_periodic(round_table, 3)
        oracle = pd.brute_oracle(round_table, 3, grid_density=4, seed=0)
        assert oracle.perimeter == pytest.approx(newton.perimeter, abs=1e-8)
        # compare configurations modulo rotation: gap sequences match
        g1 = np.diff(np.append(newton.angles, newton.angles[0] + TWO_PI))
        g2 = np.diff(np.append(oracle.angles, oracle.angles[0] + TWO_PI))
        assert np.allclose(np.sort(g1), np.sort(g2), atol=1e-6)

    def test_pentagram_oracle_closes_under_map(self, round_table):
        oracle = pd.brute_oracle(round_table, 5, m=2, grid_density=3, seed=1)
        assert pd.closure_by_iteration(round_table, oracle.angles, 2) < 1e-5
        assert oracle.perimeter == pytest.approx(10 * np.tan(2 * np.pi / 5), abs=1e-6)

    def test_perturbed_circle_oracle_vs_newton_polish(self):
        oval = perturbed_circle(0.02, 3)
        oracle = pd.brute_oracle(oval, 3, grid_density=6, seed=2)
        polished = pd.find_periodic(oval, 3, seed_angles=oracle.angles)
        assert np.max(np.abs(oracle.angles - polished.angles)) < 1e-6
        assert polished.residual < 1e-11


class TestInvariantCurveScan:
    def test_circle_every_angle_closes(self, round_table):
        report = pd.invariant_curve_scan(round_table, 4, samples=64)
        assert report.all_closed
        assert report.max_closure_run == 64

    def test_forge_table_every_angle_closes(self, forge_table):
        oval, _ = forge_table
        report = pd.invariant_curve_scan(oval, 4, samples=64)
        assert report.all_closed
        assert np.nanmax(np.abs(report.residual)) < 1e-8

    def test_generic_table_isolated_closures(self, wobble3_table):
        report = pd.invariant_curve_scan(wobble3_table, 3, samples=256)
        assert report.solver_failures == 0
        assert not report.all_closed
        assert report.max_closure_run <= 2
        # 3-fold symmetric table: two critical families per third of a turn
        assert report.sign_changes == 6

    def test_star_polygons_on_integrable_table(self, round_table):
        report = pd.invariant_curve_scan(round_table, 5, m=2, samples=16)
        assert report.all_closed

    def test_csv_layout(self, round_table):
        report = pd.invariant_curve_scan(round_table, 3, samples=8)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "alpha1,residual,closed"
        assert len(lines) == 1 + 8 + 2


class TestRotationNumber:
    def test_circle_rotation_number(self, round_table):
        w = 2 * np.pi / 5
        rho = pd.rotation_number(round_table, ChordConfig(0.0, w), iters=50)
        assert rho == pytest.approx(w / TWO_PI, abs=1e-12)

    def test_forge_family_quarter(self, forge_table):
        oval, family = forge_table
        s = family.state(0.3)
        rho = pd.rotation_number(oval, ChordConfig(s.alpha1, s.alpha2), iters=40)
        assert rho == pytest.approx(0.25, abs=1e-10)
