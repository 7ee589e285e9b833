import numpy as np
import pytest

from outerlength import genfun as gf
from outerlength.errors import ChordDomainError
from outerlength.genfun import ChordConfig
from outerlength.oval import ellipse

TWO_PI = 2.0 * np.pi


class TestCircleExactValues:
    def test_right_angle_chord(self, round_table):
        cfg = ChordConfig(0.0, np.pi / 2)
        l1, l2 = gf.tangent_lengths(round_table, cfg)
        assert abs(l1 - 1.0) < 1e-12 and abs(l2 - 1.0) < 1e-12
        assert abs(gf.generating_S(round_table, cfg) - (2 - np.pi / 2)) < 1e-12
        S1, S2 = gf.grad_S(round_table, cfg)
        assert abs(S1 + 1.0) < 1e-12 and abs(S2 - 1.0) < 1e-12
        R1, R2 = gf.radii(round_table, cfg)
        assert abs(R1 - 1.0) < 1e-12 and abs(R2 - 1.0) < 1e-12
        S11, S12, S22 = gf.hess_S(round_table, cfg)
        assert abs(S11 - 2.0) < 1e-12
        assert abs(S12 + 2.0) < 1e-12
        assert abs(S22 - 2.0) < 1e-12

    def test_two_thirds_pi_chord(self, round_table):
        cfg = ChordConfig(0.0, 2 * np.pi / 3)
        l1, l2 = gf.tangent_lengths(round_table, cfg)
        assert abs(l1 - np.sqrt(3)) < 1e-12 and abs(l2 - np.sqrt(3)) < 1e-12
        R1, R2 = gf.radii(round_table, cfg)
        assert abs(R1 - 3.0) < 1e-12 and abs(R2 - 3.0) < 1e-12
        S11, S12, S22 = gf.hess_S(round_table, cfg)
        assert abs(S11 - 4 * np.sqrt(3)) < 1e-11
        assert abs(S12 + 4 * np.sqrt(3)) < 1e-11
        assert abs(S22 - 4 * np.sqrt(3)) < 1e-11

    def test_length_is_tan_half_gap(self, round_table):
        for w in (0.3, 1.0, 2.0, 2.6):
            l1, _ = gf.tangent_lengths(round_table, ChordConfig(0.7, 0.7 + w))
            assert abs(l1 - np.tan(w / 2)) < 1e-12

    def test_small_gap_cubic_asymptotics(self, round_table):
        # S = 2 tan(w/2) - w ~ w^3 / 12 as w -> 0
        w = 1e-2
        S = gf.generating_S(round_table, ChordConfig(0.0, w))
        assert abs(S / (w**3 / 12.0) - 1.0) < 1e-3

    def test_rotation_invariance(self, round_table):
        rng = np.random.default_rng(5)
        w = 1.3
        vals = []
        for _ in range(10):
            a1 = rng.uniform(0, TWO_PI)
            cfg = ChordConfig(a1, a1 + w)
            vals.append(
                (
                    gf.generating_S(round_table, cfg),
                    *gf.tangent_lengths(round_table, cfg),
                    *gf.radii(round_table, cfg),
                )
            )
        vals = np.array(vals)
        assert np.max(np.ptp(vals, axis=0)) < 1e-12


class TestEllipseChord:
    def test_vertex_chord_lengths(self):
        e = ellipse(2.0, 1.0)
        l1, l2 = gf.tangent_lengths(e, ChordConfig(0.0, np.pi / 2))
        # chord vertex is (2, 1): tangent touch points are (2, 0) and (0, 1)
        assert abs(l1 - 1.0) < 1e-9
        assert abs(l2 - 2.0) < 1e-9


class TestDefiningIdentity:
    def test_S_equals_lengths_minus_arc(self, wobble3_table, ellipse_table):
        rng = np.random.default_rng(11)
        for oval in (wobble3_table, ellipse_table):
            a1, a2 = gf.sample_chords(rng, 200, 0.05, np.pi - 0.05)
            l1, l2 = gf.lengths_arr(oval, a1, a2)
            arcs = np.array([oval.arc_length(x, y) for x, y in zip(a1, a2)])
            S = gf.S_arr(oval, a1, a2)
            assert np.max(np.abs(S - (l1 + l2 - arcs))) < 1e-10

    def test_dual_first_order_forms(self, wobble3_table):
        # raw support form of the gradient vs the l * tan(w/2) radii
        rng = np.random.default_rng(12)
        a1, a2 = gf.sample_chords(rng, 500, 0.02, np.pi - 0.02)
        S1, S2 = gf.grad_arr(wobble3_table, a1, a2)
        R1, R2 = gf.radii_arr(wobble3_table, a1, a2)
        assert np.max(np.abs(S1 + R1)) < 1e-10
        assert np.max(np.abs(S2 - R2)) < 1e-10
        assert np.all(R1 > 0) and np.all(R2 > 0)


class TestFiniteDifferences:
    def test_gradient_against_fd(self, wobble3_table, forge_table):
        rng = np.random.default_rng(13)
        for oval in (wobble3_table, forge_table[0]):
            a1, a2 = gf.sample_chords(rng, 400)
            g1, g2 = gf.grad_arr(oval, a1, a2)
            f1, f2 = gf.fd_grad_arr(oval, a1, a2)
            assert np.max(np.abs(g1 - f1)) < 1e-6
            assert np.max(np.abs(g2 - f2)) < 1e-6

    def test_hessian_against_fd(self, wobble3_table, forge_table):
        rng = np.random.default_rng(14)
        for oval in (wobble3_table, forge_table[0]):
            a1, a2 = gf.sample_chords(rng, 400)
            h11, h12, h22 = gf.hess_arr(oval, a1, a2)
            e11, e12, e22 = gf.fd_hess_arr(oval, a1, a2)
            assert np.max(np.abs(h11 - e11)) < 1e-4
            assert np.max(np.abs(h12 - e12)) < 1e-4
            assert np.max(np.abs(h22 - e22)) < 1e-4

    def test_scalar_wrappers_match_vector_forms(self, wobble3_table):
        cfg = ChordConfig(0.4, 1.9)
        assert gf.fd_grad_S(wobble3_table, cfg) == pytest.approx(
            gf.grad_S(wobble3_table, cfg), abs=1e-6
        )
        assert gf.fd_hess_S(wobble3_table, cfg) == pytest.approx(
            gf.hess_S(wobble3_table, cfg), abs=1e-4
        )


class TestSignPattern:
    def test_hessian_signs_bulk(self, round_table, ellipse_table, wobble3_table):
        rng = np.random.default_rng(15)
        for oval in (round_table, ellipse_table, wobble3_table):
            a1, a2 = gf.sample_chords(rng, 5000, 1e-3, np.pi - 1e-3)
            S11, S12, S22 = gf.hess_arr(oval, a1, a2)
            assert np.all(S11 > 0)
            assert np.all(S22 > 0)
            assert np.all(S12 < 0)


class TestDomainGuard:
    @pytest.mark.parametrize("w", [1e-5, np.pi - 1e-5, -0.3, np.pi + 0.1])
    def test_bad_gap_rejected(self, w):
        with pytest.raises(ChordDomainError):
            ChordConfig(0.0, w)

    def test_functions_reject_bad_gap(self, round_table):
        with pytest.raises(ChordDomainError):
            gf.lengths_arr(round_table, 0.0, np.pi)

    def test_step_data_bundle(self, round_table):
        data = gf.step_data(round_table, ChordConfig(0.0, np.pi / 2), second_order=True)
        assert data.l1 == pytest.approx(1.0)
        assert data.S11 == pytest.approx(2.0)
        assert data.S12 == pytest.approx(-2.0)
