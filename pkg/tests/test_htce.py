"""Trigger estimation: geometry, breakdown routes, trigger radii, RSS
thresholds, packet loss, and WLAN usage."""
import math

import numpy as np
import pytest
from scipy.stats import norm

from vhokit.channel import CellModel, RngStream, rss_at_distance
from vhokit.hne import LatencyBudget
from vhokit.htce import (
    BreakdownMethod,
    TriggerConfig,
    TriggerGeometry,
    _usage_at_radius,
    boundary_traversal_time,
    breakdown_divergence_report,
    breakdown_probability,
    closed_form_breakdown_raw,
    exit_distance,
    packet_loss,
    rss_threshold_adaptive,
    rss_threshold_static,
    trigger_radius,
    trigger_radius_for_target,
    wlan_usage_fraction,
)

PI = math.pi


@pytest.fixture
def geom():
    # 3-4-5 triangle: chord = 50, reference point 20 m from entry.
    return TriggerGeometry(r1=30.0, r2=40.0, d_a=20.0, theta=PI / 2)


@pytest.fixture
def cell():
    return CellModel(mean_radius=50.0, sigma_radius=3.0)


class TestGeometry:
    def test_invariants(self):
        with pytest.raises(ValueError):
            TriggerGeometry(-1.0, 40.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            TriggerGeometry(30.0, 40.0, 0.0, 4.0)
        with pytest.raises(ValueError, match="traversal distance"):
            TriggerGeometry(30.0, 40.0, 60.0, PI / 2)

    def test_exit_distance(self, geom):
        assert exit_distance(geom) == pytest.approx(30.0)
        full = TriggerGeometry(30.0, 40.0, 0.0, PI / 2)
        assert exit_distance(full) == pytest.approx(50.0)
        none = TriggerGeometry(30.0, 40.0, 50.0, PI / 2)
        assert exit_distance(none) == pytest.approx(0.0, abs=1e-12)

    def test_boundary_time(self, geom):
        assert boundary_traversal_time(geom, 5.0) == pytest.approx(6.0)
        assert boundary_traversal_time(geom, 10.0) == pytest.approx(3.0)
        with pytest.raises(ValueError):
            boundary_traversal_time(geom, 0.0)


class TestBreakdownProbability:
    def test_certain_when_boundary_inside_trigger(self, geom):
        assert breakdown_probability(geom, 5.0, 1.0, r_s=45.0) == 1.0

    def test_zero_when_margin_covers_latency(self, geom):
        # tau_d < (r2 - r_s)/v: 1.0 < (40-30)/5.
        assert breakdown_probability(geom, 5.0, 1.0, r_s=30.0) == 0.0

    def test_closed_form_clamped_into_unit_interval(self, geom):
        p = breakdown_probability(geom, 5.0, 2.1, r_s=32.0,
                                  method=BreakdownMethod.CLOSED_FORM)
        assert 0.0 <= p <= 1.0

    def test_closed_form_raw_is_negative_midrange(self, geom):
        # The verbatim middle branch carries a 1 - pi constant that makes it
        # negative over most of its domain; this pins the known defect.
        assert closed_form_breakdown_raw(geom, 5.0, 2.1) < 0.0

    def test_sampled_matches_angle_tail(self, geom):
        # Oracle: P(boundary time < tau_d) = P(chord < d_a + tau_d*v), a
        # direct angle-CDF evaluation.
        v, tau_d = 5.0, 2.1
        p = breakdown_probability(geom, v, tau_d, r_s=32.0,
                                  method=BreakdownMethod.SAMPLED,
                                  n=400_000, rng=RngStream(8))
        limit = geom.d_a + tau_d * v
        arg = (geom.r1**2 + geom.r2**2 - limit**2) / (2 * geom.r1 * geom.r2)
        theta_star = math.acos(max(-1.0, min(1.0, arg)))
        expected = (2 * PI - theta_star) * theta_star / PI**2
        assert p == pytest.approx(expected, abs=0.003)

    def test_sampled_non_decreasing_in_speed(self, geom):
        values = [
            breakdown_probability(geom, v, 2.1, r_s=32.0,
                                  method=BreakdownMethod.SAMPLED,
                                  n=200_000, rng=RngStream(8))
            for v in (4.0, 6.0, 8.0, 10.0)
        ]
        assert all(b >= a - 0.005 for a, b in zip(values, values[1:]))

    def test_sampled_requires_rng(self, geom):
        with pytest.raises(ValueError, match="rng"):
            breakdown_probability(geom, 5.0, 2.1, r_s=32.0)


class TestTriggerRadius:
    def test_zero_adjustment_reduction(self):
        geom = TriggerGeometry(r1=30.0, r2=40.0, d_a=25.0, theta=PI / 2)
        cfg = TriggerConfig(p_break_target=0.7)
        r_s = trigger_radius(geom, 5.0, 1.0, cfg)
        psi = math.cos((PI / 2) * (0.7 + PI - 1.0))
        inner = (geom.d_a**2 - geom.r1**2 + 2 * geom.d_a * 1.0 * 5.0
                 + 25.0 + geom.r1**2 * psi**2)
        assert r_s == pytest.approx(abs(geom.r1 * psi - math.sqrt(inner)), abs=1e-12)

    def test_channel_adjustment_shrinks_radius(self):
        geom = TriggerGeometry(r1=30.0, r2=40.0, d_a=25.0, theta=PI / 2)
        base = trigger_radius(geom, 5.0, 1.0, TriggerConfig(p_break_target=0.7))
        adjusted = trigger_radius(
            geom, 5.0, 1.0,
            TriggerConfig(p_break_target=0.7, channel_adjustment=25.0))
        assert adjusted == pytest.approx(math.sqrt(base**2 - 25.0))

    def test_formula_monotone_decreasing_in_target(self):
        # Across a configuration where every radicand is valid, the closed
        # form places the trigger farther from the AP boundary for smaller
        # tolerances.
        geom = TriggerGeometry(50.0, 50.0, 40.0, PI / 2)
        radii = [trigger_radius(geom, 10.0, 1.0, TriggerConfig(p_break_target=p))
                 for p in (0.02, 0.3, 0.5, 0.7)]
        assert all(a > b for a, b in zip(radii, radii[1:]))

    def test_negative_radicand_raises(self):
        geom = TriggerGeometry(50.0, 50.0, 2.0, PI / 2)
        with pytest.raises(ValueError, match="radicand"):
            trigger_radius(geom, 10.0, 0.2, TriggerConfig(p_break_target=0.7))

    def test_outer_radicand_raises(self, geom):
        with pytest.raises(ValueError, match="radicand"):
            trigger_radius(geom, 5.0, 1.0,
                           TriggerConfig(p_break_target=0.7, channel_adjustment=1e6))


class TestTriggerRadiusForTarget:
    def test_ideal_circle_limit(self):
        cell = CellModel(mean_radius=50.0, sigma_radius=0.0)
        assert trigger_radius_for_target(cell, 10.0, 0.5, 0.3) == pytest.approx(45.0)

    def test_inverts_radial_breakdown(self, cell):
        # Oracle: the Gaussian exit-radius CDF evaluated at r_s + tau_d*v
        # must give back the target.
        for p in (0.02, 0.3, 0.7):
            r_s = trigger_radius_for_target(cell, 10.0, 0.1, p)
            back = norm.cdf((r_s + 1.0 - cell.mean_radius) / cell.sigma_radius)
            assert back == pytest.approx(p, abs=1e-12)

    def test_monotone_increasing_in_target(self, cell):
        radii = [trigger_radius_for_target(cell, 10.0, 0.1, p)
                 for p in (0.02, 0.1, 0.3, 0.5, 0.7)]
        assert all(b > a for a, b in zip(radii, radii[1:]))

    def test_boundary_gap_non_increasing_in_target(self, cell):
        gaps = [cell.mean_radius - trigger_radius_for_target(cell, 10.0, 0.1, p)
                for p in (0.02, 0.3, 0.7)]
        assert all(b <= a for a, b in zip(gaps, gaps[1:]))

    def test_too_fast_raises(self, cell):
        with pytest.raises(ValueError, match="not positive"):
            trigger_radius_for_target(cell, 600.0, 0.1, 0.02)


class TestRssThresholds:
    def test_static_deterministic_when_no_shadowing(self):
        cell = CellModel(mean_radius=50.0, shadow_sigma_db=0.0)
        assert rss_threshold_static(cell, 40.0, RngStream(1)) == pytest.approx(
            rss_at_distance(cell, 40.0))

    def test_static_zero_mean_shadowing(self):
        cell = CellModel(mean_radius=50.0, shadow_sigma_db=4.0)
        gen = RngStream(5).generator()
        draws = np.array([rss_threshold_static(cell, 40.0, gen) for _ in range(1000)])
        assert abs(draws.mean() - rss_at_distance(cell, 40.0)) < 0.1 * 4.0

    def test_adaptive_reduces_to_border_at_zero_speed(self, cell):
        budget = LatencyBudget(tau_a=1.0, tau_d=0.1, tau_b=0.5, delta=0.5)
        border = rss_at_distance(cell, 50.0)
        assert rss_threshold_adaptive(cell, 50.0, 0.0, budget) == pytest.approx(border)

    def test_adaptive_hand_value(self):
        # beta=3, r2=100, tau_b+delta=1, v=50: border - 30*log10(0.5).
        cell = CellModel(mean_radius=100.0, path_loss_exponent=3.0)
        budget = LatencyBudget(tau_a=1.0, tau_d=0.1, tau_b=0.6, delta=0.4)
        got = rss_threshold_adaptive(cell, 100.0, 50.0, budget, rss_at_border=-80.0)
        assert got == pytest.approx(-80.0 + 9.030899870, abs=1e-8)

    def test_adaptive_strictly_increasing_in_speed(self, cell):
        budget = LatencyBudget(tau_a=1.0, tau_d=0.1, tau_b=0.04, delta=0.01)
        values = [rss_threshold_adaptive(cell, 50.0, v, budget)
                  for v in (0.0, 5.0, 10.0, 20.0, 40.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_adaptive_never_below_border(self, cell):
        budget = LatencyBudget(tau_a=1.0, tau_d=0.1, tau_b=0.04, delta=0.01)
        border = rss_at_distance(cell, 50.0)
        for v in np.linspace(0.0, 100.0, 23):
            assert rss_threshold_adaptive(cell, 50.0, v, budget) >= border

    def test_adaptive_too_fast_raises(self, cell):
        budget = LatencyBudget(tau_a=1.0, tau_d=0.1, tau_b=1.0, delta=1.0)
        with pytest.raises(ValueError, match="too fast"):
            rss_threshold_adaptive(cell, 50.0, 30.0, budget)


class TestPacketLoss:
    def test_equal_thresholds_lose_nothing(self, cell):
        assert packet_loss(cell, 50.0, 10.0, -75.0, -75.0, -71.0, 60.0) == 0.0

    def test_early_fixed_trigger_clamped_to_zero(self, cell):
        assert packet_loss(cell, 50.0, 10.0, -60.0, -75.0, -71.0, 60.0) == 0.0

    def test_hand_value(self):
        # beta=3 (F2=30), border-fixed=30 dB, border-adaptive=15 dB,
        # r2=50, rate=60, v=10: (10 - 10^0.5) * 300 = 2051.3167.
        cell = CellModel(mean_radius=50.0, path_loss_exponent=3.0)
        loss = packet_loss(cell, 50.0, 10.0, -101.0, -86.0, -71.0, 60.0)
        assert loss == pytest.approx(2051.3167019, abs=1e-4)

    def test_strictly_positive_when_fixed_fires_late(self, cell):
        loss = packet_loss(cell, 50.0, 10.0, -75.0, -72.0, -71.0, 60.0)
        assert loss > 0.0

    def test_errors(self, cell):
        with pytest.raises(ValueError):
            packet_loss(cell, 50.0, 0.0, -75.0, -72.0, -71.0, 60.0)
        with pytest.raises(ValueError):
            packet_loss(cell, 50.0, 10.0, -75.0, -72.0, -71.0, -1.0)


class TestUsage:
    def test_trigger_at_entry_when_never_above_threshold(self):
        # Trigger radius at the entry radius: the node is at the threshold
        # immediately, so almost none of the dwell is used.
        theta = np.linspace(0.1, PI - 0.1, 500)
        usage = _usage_at_radius(50.0, 50.0, theta, r_s=50.0)
        assert usage.max() == pytest.approx(0.0, abs=1e-12)

    def test_trigger_at_boundary_uses_everything(self):
        theta = np.linspace(0.1, PI - 0.1, 500)
        usage = _usage_at_radius(45.0, 50.0, theta, r_s=55.0)
        assert usage.min() == pytest.approx(1.0, abs=1e-12)

    def test_outbound_crossing_between_extremes(self):
        theta = np.full(1, PI / 2)
        usage = _usage_at_radius(50.0, 50.0, theta, r_s=55.0)
        assert usage[0] == pytest.approx(1.0)
        # Crossing at 49 m on the way out of a 50/50 right-angle chord.
        usage_mid = _usage_at_radius(40.0, 50.0, theta, r_s=49.0)
        assert 0.5 < usage_mid[0] < 1.0

    def test_wlan_usage_fraction_in_unit_interval(self):
        geom = TriggerGeometry(50.0, 50.0, 40.0, PI / 2)
        cfg = TriggerConfig(p_break_target=0.7)
        frac = wlan_usage_fraction(geom, 10.0, 1.0, cfg, 50_000, RngStream(2))
        assert 0.0 <= frac <= 1.0

    def test_wlan_usage_needs_trials(self):
        geom = TriggerGeometry(50.0, 50.0, 40.0, PI / 2)
        with pytest.raises(ValueError):
            wlan_usage_fraction(geom, 10.0, 1.0, TriggerConfig(p_break_target=0.7),
                                0, RngStream(2))


class TestDivergenceReport:
    def test_report_structure(self, geom):
        points = [(geom, v, tau_d, 32.0) for v in (4.0, 6.0) for tau_d in (1.5, 2.5)]
        rows = breakdown_divergence_report(points, n=20_000, rng=RngStream(13))
        assert len(rows) == 4
        for row in rows:
            assert 0.0 <= row["closed_form_clamped"] <= 1.0
            assert 0.0 <= row["sampled"] <= 1.0
            assert row["divergence"] == pytest.approx(
                abs(row["closed_form_clamped"] - row["sampled"]))


class TestTriggerConfig:
    def test_invariants(self):
        with pytest.raises(ValueError):
            TriggerConfig(p_break_target=0.0)
        with pytest.raises(ValueError):
            TriggerConfig(p_break_target=1.0)
        with pytest.raises(ValueError):
            TriggerConfig(p_break_target=0.5, chi=1.5)
        with pytest.raises(ValueError):
            TriggerConfig(p_break_target=0.5, data_rate=-1.0)
