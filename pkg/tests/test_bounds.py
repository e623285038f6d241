import math

import pytest
from hypothesis import given, settings, strategies as st

from zchannel.bounds import (
    BoundReport,
    apx_cw_ratio_bound,
    augmented_weight_band_bound,
    balanced_lower_constant,
    bassalygo_cw,
    close_weights_bound,
    cw_list_upper,
    falling_ratio_max_M,
    general_upper_bound,
    plotkin_classic,
    plotkin_point,
    tau_L_of_w,
    unique_above_plotkin,
)


class TestPlotkinPoint:
    def test_l2_exact(self):
        p = plotkin_point(2)
        assert (p.w_max, p.tau_L) == (0.5, 0.25)

    @pytest.mark.parametrize("L", [2, 3, 4, 5, 8])
    def test_w_max_maximizes_tau(self, L):
        p = plotkin_point(L)
        assert p.tau_L == pytest.approx(tau_L_of_w(L, p.w_max))
        for d in (1e-3, -1e-3):
            assert tau_L_of_w(L, p.w_max + d) < p.tau_L

    def test_frozen(self):
        assert plotkin_point(3).tau_L == pytest.approx(0.3849001794597505, abs=1e-12)
        assert plotkin_point(4).tau_L == pytest.approx(0.4724703937105774, abs=1e-12)

    def test_rejects_l1(self):
        with pytest.raises(ValueError):
            plotkin_point(1)


class TestUniqueBounds:
    def test_plotkin(self):
        assert plotkin_classic(6, 2).value == 2
        assert plotkin_classic(4, 2).value == 0
        assert plotkin_classic(4, 2).flags == ["degenerate:min_distance_exceeds_n"]
        r = plotkin_classic(8, 2)
        assert r.value is None and not r.preconditions_met

    def test_bassalygo(self):
        assert bassalygo_cw(8, 2, 3).value == 16
        r = bassalygo_cw(9, 2, 3)
        assert r.value == math.inf and "singular" in r.flags
        assert bassalygo_cw(10, 2, 4).value is None

    def test_unique_above(self):
        assert unique_above_plotkin(1000, 0.01).value == pytest.approx(1258.6)
        r = unique_above_plotkin(1000, 0.1)
        assert r.value is None and r.conditions["eps<1/12-3/n"] is False
        assert unique_above_plotkin(30, 0.01).value is None

    def test_report_rejects_value_with_failed_preconditions(self):
        with pytest.raises(ValueError):
            BoundReport("x", 3, False)

    def test_row(self):
        row = plotkin_classic(8, 2).to_row()
        assert row["value"] == "" and row["preconditions"] == "failed:t>n/4"


class TestDoubleCounting:
    def test_falling_ratio(self):
        assert falling_ratio_max_M(2, 1.0) == math.inf
        assert falling_ratio_max_M(2, 2.5) == 1
        assert falling_ratio_max_M(2, 1.25) == 5
        # M/(M-1) >= 1 + 1/k  <=>  M <= k + 1
        for k in (3, 10, 99):
            assert falling_ratio_max_M(2, 1 + 1 / k) == k + 1

    def test_cw_values(self):
        assert cw_list_upper(2, 0.5, 1 / 12).value == 4
        p3 = plotkin_point(3)
        r = cw_list_upper(3, p3.w_max, 0.01)
        assert r.value == 117
        assert r.value >= balanced_lower_constant(3, p3.w_max) / 0.01

    def test_tight_codes_are_not_rejected_by_round_off(self):
        # five weight-4 words of length 5 meet the double-counting bound with equality
        w, tau = 0.8, 0.2
        assert cw_list_upper(2, w, tau - tau_L_of_w(2, w)).value == 5
        assert apx_cw_ratio_bound(2, w, 0.0, tau).value == 5
        assert augmented_weight_band_bound(2, 1 / 3, 1 / 3, 1 / 3).holds_for(3)

    def test_cw_tau_beyond_weight(self):
        r = cw_list_upper(2, 0.3, 0.2)
        assert r.value == 1 and "tau_exceeds_weight" in r.flags

    def test_cw_asymptotic_tracks_value(self):
        for eps in (1e-3, 1e-4):
            r = cw_list_upper(2, 0.5, eps)
            assert r.value == pytest.approx(r.extra["asymptotic"], rel=0.01)

    def test_apx(self):
        assert apx_cw_ratio_bound(2, 0.5, 0.05, 0.3).value == math.inf
        assert "vacuous:ratio<=1" in apx_cw_ratio_bound(2, 0.5, 0.05, 0.3).flags
        assert apx_cw_ratio_bound(2, 0.5, 0.01, 0.3).value == 9
        assert apx_cw_ratio_bound(2, 0.5, 0.4, 0.3).value is None

    def test_apx_reduces_to_cw_at_zero_delta(self):
        for eps in (0.01, 0.05):
            assert apx_cw_ratio_bound(2, 0.5, 0.0, 0.25 + eps).value == cw_list_upper(2, 0.5, eps).value

    def test_augmented(self):
        assert augmented_weight_band_bound(2, 0.5, 0.5, 0.3).value == pytest.approx(6)
        r = augmented_weight_band_bound(2, 0.4, 0.6, 0.3)
        assert r.value == math.inf and "vacuous:ratio>=1" in r.flags
        assert augmented_weight_band_bound(3, 0.5, 0.6, 0.45).value == pytest.approx(62.11407193902354)
        assert "tau<=tau_L" in augmented_weight_band_bound(2, 0.5, 0.5, 0.2).flags

    def test_close_weights(self):
        assert close_weights_bound(2, 0.01).value == pytest.approx(100)
        assert close_weights_bound(3, 0.01).value == pytest.approx(400)
        assert close_weights_bound(2, 1.0).value is None

    def test_close_weights_band_condition(self):
        phi = close_weights_bound(2, 0.01).extra["phi_L"]
        assert phi == pytest.approx(1.5)
        ok = close_weights_bound(2, 0.01, 0.5, 0.5 + 0.99 * phi * 0.01)
        assert ok.preconditions_met
        wide = close_weights_bound(2, 0.01, 0.4, 0.6)
        assert not wide.preconditions_met

    def test_close_weights_dominates_band_bound(self):
        for L in (2, 3):
            eps = 0.01
            tau = plotkin_point(L).tau_L + eps
            phi = close_weights_bound(L, eps).extra["phi_L"]
            for c in (0.3, 0.5, 0.7):
                w1 = c - phi * eps / 2
                w2 = c + phi * eps / 2
                band = augmented_weight_band_bound(L, w1, w2, tau).value
                assert band <= close_weights_bound(L, eps).value * (1 + 1e-9)


class TestGeneralBound:
    def test_frozen_l2(self):
        assert [general_upper_bound(2, e).value for e in (0.04, 0.02, 0.01, 0.005)] == [82, 251, 794, 2232]

    def test_frozen_l3_l4(self):
        assert [general_upper_bound(3, e).value for e in (0.04, 0.01)] == [499, 3701]
        assert [general_upper_bound(4, e).value for e in (0.04, 0.01)] == [1348, 10825]

    def test_bands_tile_unit_interval(self):
        r = general_upper_bound(2, 0.01)
        bands = r.extra["bands"]
        assert bands[0]["w1"] == 0.0 and bands[-1]["w2"] == 1.0
        for a, b in zip(bands, bands[1:]):
            assert a["w2"] == b["w1"]
        assert sum(b["count"] for b in bands) == r.value
        assert all(b["bound"] <= r.extra["cap"] for b in bands)

    def test_band_narrowest_near_w_max(self):
        bands = general_upper_bound(2, 0.001).extra["bands"]

        def width_at(w):
            return next(b["w2"] - b["w1"] for b in bands if b["w1"] <= w <= b["w2"])

        assert width_at(0.5) <= width_at(0.1)

    def test_domain(self):
        assert general_upper_bound(2, 0.3).value is None
        assert general_upper_bound(2, 0.0).value is None

    @settings(max_examples=15, deadline=None)
    @given(st.floats(0.003, 0.2), st.floats(0.003, 0.2))
    def test_nonincreasing_in_eps(self, a, b):
        lo, hi = sorted((a, b))
        assert general_upper_bound(2, hi).value <= general_upper_bound(2, lo).value

    @pytest.mark.parametrize("L,lo,hi", [(2, 0.6, 0.8), (3, 3.5, 4.2), (4, 10.0, 11.2)])
    def test_scaling(self, L, lo, hi):
        for eps in (0.02, 0.01, 0.005):
            assert lo <= general_upper_bound(L, eps).value * eps**1.5 <= hi
