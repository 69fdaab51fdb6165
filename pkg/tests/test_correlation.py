"""Pair and inserted-triple correlation maps over dependence windows."""

import numpy as np
import pytest

import kopula as ko

from helpers import constrained_epd_sampler


class TestKor2:
    def test_independence_is_zero(self):
        assert ko.kor2(0.4, 0.3, 0.12) == 0.0

    def test_upper_bound_is_plus_one(self):
        assert ko.kor2(0.4, 0.3, 0.3) == pytest.approx(1.0, abs=1e-15)

    def test_disjoint_is_minus_one(self):
        assert ko.kor2(0.4, 0.3, 0.0) == pytest.approx(-1.0, abs=1e-15)

    def test_positive_side_scaling(self):
        # kov = 0.08 against upper room 0.18
        assert ko.kor2(0.4, 0.3, 0.2) == pytest.approx(4 / 9, abs=1e-12)

    def test_negative_side_scaling(self):
        assert ko.kor2(0.4, 0.3, 0.06) == pytest.approx(-0.5, abs=1e-12)

    def test_pair_value_outside_window_rejected(self):
        with pytest.raises(ko.InfeasibleParameterError):
            ko.kor2(0.4, 0.3, 0.35)

    def test_no_room_with_nonzero_kov_is_undefined(self):
        with pytest.raises(ko.UndefinedCorrelationError):
            ko.kor2(1.0, 0.3, 0.3 + 9e-10)

    def test_no_room_with_zero_kov_is_zero(self):
        assert ko.kor2(1.0, 0.3, 0.3) == 0.0

    def test_probability_inputs_validated(self):
        with pytest.raises(ko.ParameterRangeError):
            ko.kor2(1.2, 0.3, 0.2)

    def test_sign_matches_covariance(self, ctx2, rng):
        for _ in range(50):
            px, py = rng.uniform(0.05, 0.95, size=2)
            window = ko.frechet_bounds({}, 0b1, py, px)
            pxy = rng.uniform(window.lower, window.upper)
            kor = ko.kor2(px, py, pxy)
            kov = pxy - px * py
            assert kor == 0.0 or np.sign(kor) == np.sign(kov)


class TestPxyFromKor2:
    @pytest.mark.parametrize(
        "kor,expected", [(-1.0, 0.0), (0.0, 0.12), (1.0, 0.3)]
    )
    def test_endpoints_and_center(self, kor, expected):
        assert ko.pxy_from_kor2(0.4, 0.3, kor) == pytest.approx(expected, abs=1e-15)

    def test_negative_side_is_linear_in_the_product(self):
        assert ko.pxy_from_kor2(0.4, 0.3, -0.5) == pytest.approx(0.06, abs=1e-15)

    def test_kor_outside_range_rejected(self):
        with pytest.raises(ko.ParameterRangeError):
            ko.pxy_from_kor2(0.4, 0.3, 1.5)

    def test_roundtrip(self):
        for kor in np.linspace(-1.0, 1.0, 101):
            pxy = ko.pxy_from_kor2(0.4, 0.3, float(kor))
            assert ko.kor2(0.4, 0.3, pxy) == pytest.approx(float(kor), abs=1e-12)

    def test_monotone_in_kor(self):
        values = [ko.pxy_from_kor2(0.35, 0.25, k) for k in np.linspace(-1, 1, 41)]
        assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))


class TestInsertedTripleKovBounds:
    def test_frozen_independence_point(self, ctx3):
        p = ko.MarginalSet.from_values(ctx3, (0.5, 0.4, 0.3))
        baseline, bounds = ko.inserted_triple_kov_bounds("frame", p, 0.2, 0.15)
        assert baseline == pytest.approx(0.06, abs=1e-15)
        assert bounds.kov_minus == pytest.approx(-0.06, abs=1e-15)
        assert bounds.kov_plus == pytest.approx(0.09, abs=1e-15)

    def test_complement_mode_same_point(self, ctx3):
        p = ko.MarginalSet.from_values(ctx3, (0.5, 0.4, 0.3))
        baseline, bounds = ko.inserted_triple_kov_bounds("complement", p, 0.2, 0.15)
        assert baseline == pytest.approx(0.06, abs=1e-15)
        assert (bounds.kov_minus, bounds.kov_plus) == pytest.approx((-0.06, 0.09))

    def test_baseline_below_the_window_degenerates(self, ctx3):
        # pair values at their caps push the window above the product baseline
        p = ko.MarginalSet.from_values(ctx3, (0.5, 0.4, 0.3))
        baseline, bounds = ko.inserted_triple_kov_bounds("frame", p, 0.4, 0.3)
        assert baseline == pytest.approx(0.2, abs=1e-12)
        assert bounds.kov_minus == pytest.approx(bounds.kov_plus, abs=1e-15)
        assert bounds.kov_plus == pytest.approx(0.14, abs=1e-12)

    def test_unknown_mode_rejected(self, ctx3):
        p = ko.MarginalSet.from_values(ctx3, (0.5, 0.4, 0.3))
        with pytest.raises(ko.ParameterRangeError):
            ko.inserted_triple_kov_bounds("sideways", p, 0.2, 0.15)


class TestParamsFromKor3:
    P = (0.5, 0.4, 0.3)

    def marginals(self, ctx3):
        return ko.MarginalSet.from_values(ctx3, self.P)

    def test_zero_korrelation_is_independence(self, ctx3):
        fp = ko.params_from_kor3(self.marginals(ctx3), 0.0, 0.0, 0.0, 0.0)
        expected = ko.FrameParams.independence(self.P)
        assert fp.intersections == pytest.approx(expected.intersections, abs=1e-15)

    def test_all_plus_one_saturates_upper(self, ctx3):
        fp = ko.params_from_kor3(self.marginals(ctx3), 1.0, 1.0, 1.0, 1.0)
        assert fp.intersections == pytest.approx(
            {0b011: 0.4, 0b101: 0.3, 0b110: 0.2, 0b111: 0.2}, abs=1e-12
        )

    def test_all_minus_one_saturates_lower(self, ctx3):
        fp = ko.params_from_kor3(self.marginals(ctx3), -1.0, -1.0, -1.0, -1.0)
        assert fp.intersections == pytest.approx(
            {0b011: 0.0, 0b101: 0.0, 0b110: 0.2, 0b111: 0.0}, abs=1e-12
        )

    def test_unordered_marginals_rejected(self, ctx3):
        p = ko.MarginalSet.from_values(ctx3, (0.3, 0.4, 0.2))
        with pytest.raises(ko.ParameterRangeError):
            ko.params_from_kor3(p, 0.0, 0.0, 0.0, 0.0)

    def test_kor_outside_range_rejected(self, ctx3):
        with pytest.raises(ko.ParameterRangeError):
            ko.params_from_kor3(self.marginals(ctx3), 1.2, 0.0, 0.0, 0.0)

    def test_unknown_modification_rejected(self, ctx3):
        with pytest.raises(ko.ParameterRangeError):
            ko.params_from_kor3(self.marginals(ctx3), 0.0, 0.0, 0.0, 0.0, modification=3)

    def test_second_modification_differs_off_baseline(self, ctx3):
        # kor_xy = kor_xz = +1 pushes the inner window above the product
        # baseline; the two off-window anchors then disagree
        p = self.marginals(ctx3)
        fp1 = ko.params_from_kor3(p, 1.0, 1.0, 0.0, 0.0, modification=1)
        fp2 = ko.params_from_kor3(p, 1.0, 1.0, 0.0, 0.0, modification=2)
        assert fp1.intersections[0b111] == pytest.approx(0.2, abs=1e-12)
        assert fp2.intersections[0b111] == pytest.approx(0.2 + 0.014 / 0.38, abs=1e-12)
        for fp in (fp1, fp2):
            d = ko.triplet_epd(p, fp)
            assert ko.validate_epd1(d).ok

    def test_degenerate_marginal_forces_zero_parameters(self, ctx3):
        p = ko.MarginalSet.from_values(ctx3, (0.4, 0.3, 0.0))
        fp = ko.params_from_kor3(p, 1.0, 1.0, 1.0, 1.0)
        assert fp.intersections == pytest.approx(
            {0b011: 0.3, 0b101: 0.0, 0b110: 0.0, 0b111: 0.0}, abs=1e-15
        )
        assert ko.validate_epd1(ko.triplet_epd(p, fp)).ok

    def test_grid_of_kor_values_always_lands_inside_the_windows(self, ctx3, rng):
        kor_grid = np.linspace(-1.0, 1.0, 5)
        for _ in range(10):
            f = np.sort(rng.uniform(0.05, 0.5, size=3))[::-1]
            p = ko.MarginalSet.from_values(ctx3, tuple(f))
            for kxy in kor_grid:
                for kxz in kor_grid:
                    for kin in kor_grid:
                        for kout in kor_grid:
                            fp = ko.params_from_kor3(p, kxy, kxz, kin, kout)
                            t = fp.intersections
                            w1 = ko.frechet_bounds({}, 0b1, f[1], f[0])
                            w2 = ko.frechet_bounds({}, 0b1, f[2], f[0])
                            assert w1.contains(t[0b011])
                            assert w2.contains(t[0b101])
                            known = {0b01: t[0b011], 0b10: t[0b101]}
                            win = ko.frechet_bounds(known, 0b11, None, f[0])
                            assert win.contains(t[0b111])
                            known_out = {
                                0b01: f[1] - t[0b011],
                                0b10: f[2] - t[0b101],
                            }
                            wout = ko.frechet_bounds(known_out, 0b11, None, 1 - f[0])
                            assert wout.contains(t[0b110] - t[0b111])

    def test_every_kor_choice_builds_a_valid_table(self, ctx3, rng):
        for _ in range(25):
            f = np.sort(rng.uniform(0.05, 0.5, size=3))[::-1]
            p = ko.MarginalSet.from_values(ctx3, tuple(f))
            kor = rng.uniform(-1, 1, size=4)
            fp = ko.params_from_kor3(p, *kor)
            d = ko.triplet_epd(p, fp)
            assert ko.validate_epd1(d).ok
            np.testing.assert_allclose(ko.marginals(d).probs, f, atol=1e-12)


class TestKovBoundsAgainstSampledTables:
    def test_observed_covariances_stay_inside_the_bounds(self, ctx3, rng):
        # the shifted interval only brackets real tables while the product
        # baseline sits inside the window; the saturated branches collapse
        p = (0.5, 0.4, 0.3)
        m = ko.MarginalSet.from_values(ctx3, p)
        tables = constrained_epd_sampler(p, rng, 40, scale=0.08)
        checked = 0
        for row in tables:
            t2 = ko.epd2_from_epd1(ko.Epd1(ctx3, row))
            a1, a2 = t2.values[0b011], t2.values[0b101]
            baseline, bounds = ko.inserted_triple_kov_bounds("frame", m, a1, a2)
            if not bounds.kov_minus < 0.0 < bounds.kov_plus:
                continue
            kov = t2.values[0b111] - baseline
            assert bounds.kov_minus - 1e-9 <= kov <= bounds.kov_plus + 1e-9
            checked += 1
        assert checked >= 20
