"""Handover triggering condition estimation.

Everything needed to decide where, on the way out of a WLAN cell, a mobile
node should fire its handover: the trigger radius for a tolerated
connection-breakdown probability, the matching RSS thresholds (static and
speed-adaptive), the resulting packet-loss count for a fixed threshold, and
a Monte-Carlo WLAN-usage estimate.

Two routes exist for the breakdown probability.  The closed-form route
evaluates the piecewise expression verbatim; its middle branch carries an
additive constant that pushes it negative over most of its domain, so the
result is clamped into [0, 1] and kept purely for inspection.  The sampled
route estimates the same quantity by Monte-Carlo over the traversal-angle
distribution and is the trusted default.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from . import channel
from .channel import CellModel, _as_generator
from .hne import LatencyBudget, traversal_distance

PI = math.pi


@dataclass(frozen=True)
class TriggerGeometry:
    """One traversal through the cell: entry/exit radii (m), distance from
    the entry point to the mid-path reference point (m), and the traversal
    angle (rad)."""

    r1: float
    r2: float
    d_a: float
    theta: float

    def __post_init__(self):
        if min(self.r1, self.r2, self.d_a) < 0:
            raise ValueError("lengths must be >= 0")
        if not 0 <= self.theta <= PI:
            raise ValueError("theta must lie in [0, pi]")
        if self.d_a > traversal_distance(self.r1, self.r2, self.theta) + 1e-12:
            raise ValueError("d_a exceeds the traversal distance")


@dataclass(frozen=True)
class TriggerConfig:
    """Trigger design knobs: tolerated breakdown probability, channel
    adjustment area (m^2), boundary fraction, and AP data rate (packets/s)."""

    p_break_target: float
    channel_adjustment: float = 0.0
    chi: float = 0.5
    data_rate: float = 0.0

    def __post_init__(self):
        if not 0 < self.p_break_target < 1:
            raise ValueError("require 0 < p_break_target < 1")
        if not 0 <= self.chi <= 1:
            raise ValueError("chi must lie in [0, 1]")
        if self.data_rate < 0:
            raise ValueError("data_rate must be >= 0")


class BreakdownMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    SAMPLED = "sampled"


def exit_distance(geom: TriggerGeometry) -> float:
    """Path length from the reference point to the exit point: chord - d_a."""
    return float(traversal_distance(geom.r1, geom.r2, geom.theta) - geom.d_a)


def boundary_traversal_time(geom: TriggerGeometry, v: float) -> float:
    """Time spent between the reference point and the exit boundary."""
    if v <= 0:
        raise ValueError("v must be > 0")
    return exit_distance(geom) / v


def closed_form_breakdown_raw(geom: TriggerGeometry, v: float, tau_d: float) -> float:
    """Unclamped middle-branch breakdown expression (may fall outside [0,1])."""
    num = (
        geom.r1**2
        + geom.r2**2
        - 2.0 * geom.d_a * tau_d * v
        - (tau_d * v) ** 2
        - geom.d_a**2
    )
    arg = np.clip(num / (2.0 * geom.r1 * geom.r2), -1.0, 1.0)
    return float(1.0 - PI + (2.0 / PI) * math.acos(arg))


def breakdown_probability(geom: TriggerGeometry, v: float, tau_d: float, r_s: float,
                          method: BreakdownMethod = BreakdownMethod.SAMPLED,
                          n: int = 100_000, rng=None) -> float:
    """Connection-breakdown probability for a trigger at radius r_s.

    Certain when the exit radius is already inside the trigger radius; zero
    when the moving-out latency fits inside the radial margin; otherwise the
    selected route evaluates the in-between case.  The sampled route counts
    angle draws whose post-reference boundary time falls short of tau_d.
    """
    if r_s < 0:
        raise ValueError("r_s must be >= 0")
    if v <= 0:
        raise ValueError("v must be > 0")
    if geom.r2 < r_s:
        return 1.0
    if tau_d < (geom.r2 - r_s) / v:
        return 0.0
    if method is BreakdownMethod.CLOSED_FORM:
        return float(min(max(closed_form_breakdown_raw(geom, v, tau_d), 0.0), 1.0))
    if rng is None:
        raise ValueError("sampled method requires an rng")
    gen = _as_generator(rng)
    theta = PI * (1.0 - np.sqrt(1.0 - gen.random(n)))
    chord = traversal_distance(geom.r1, geom.r2, theta)
    boundary_time = (chord - geom.d_a) / v
    return float(np.mean(boundary_time < tau_d))


def trigger_radius(geom: TriggerGeometry, v: float, tau_d: float,
                   config: TriggerConfig) -> float:
    """Closed-form trigger radius for the configured breakdown tolerance.

    Evaluates the closed-form expression verbatim:
    sqrt([r1*psi - sqrt(d_a^2 - r1^2 + 2*d_a*tau_d*v + tau_d^2 v^2
    + r1^2 psi^2)]^2 - C_a) with psi = cos[(pi/2)(p + pi - 1)].  Raises when
    either radicand is negative.  See ``trigger_radius_for_target`` for the
    design rule the sweeps use.
    """
    if v <= 0:
        raise ValueError("v must be > 0")
    p = config.p_break_target
    psi = math.cos((PI / 2.0) * (p + PI - 1.0))
    inner = (
        geom.d_a**2
        - geom.r1**2
        + 2.0 * geom.d_a * tau_d * v
        + (tau_d * v) ** 2
        + geom.r1**2 * psi**2
    )
    if inner < 0:
        raise ValueError(
            f"trigger radius undefined for these parameters (inner radicand={inner:g})"
        )
    bracket = geom.r1 * psi - math.sqrt(inner)
    outer = bracket**2 - config.channel_adjustment
    if outer < 0:
        raise ValueError(
            f"trigger radius undefined for these parameters (outer radicand={outer:g})"
        )
    return math.sqrt(outer)


def trigger_radius_for_target(cell: CellModel, v: float, tau_d: float,
                              p_break_target: float) -> float:
    """Trigger radius from the shadow-fading design rule.

    Inverts the radial breakdown model P(exit radius < r_s + tau_d*v) for a
    Gaussian exit radius: r_s = mean + sigma*ndtri(p) - tau_d*v.  With zero
    radius spread this reduces to the ideal-circle rule mean - tau_d*v.
    """
    if not 0 < p_break_target < 1:
        raise ValueError("require 0 < p_break_target < 1")
    if v <= 0:
        raise ValueError("v must be > 0")
    r_s = cell.mean_radius + cell.sigma_radius * float(ndtri(p_break_target)) - tau_d * v
    if r_s <= 0:
        raise ValueError(
            f"trigger radius {r_s:g} m not positive: node too fast for this "
            f"cell/tolerance (v={v:g}, tau_d={tau_d:g}, p={p_break_target:g})"
        )
    return float(r_s)


def rss_threshold_static(cell: CellModel, r_s: float, rng) -> float:
    """RSS trigger threshold at the trigger radius, shadowing included."""
    return channel.rss_at_distance(cell, r_s, shadowing=rng)


def rss_threshold_adaptive(cell: CellModel, r2: float, v: float,
                           budget: LatencyBudget, rss_at_border: float | None = None) -> float:
    """Speed-adaptive RSS threshold.

    RSS_B - 10*beta*log10(1 - (tau_b + delta)*v / r2): the faster the node,
    the earlier (higher) the threshold.  Requires the notification latency
    flight to fit inside the cell radius.
    """
    if v < 0:
        raise ValueError("v must be >= 0")
    arg = 1.0 - (budget.tau_b + budget.delta) * v / r2
    if arg <= 0:
        raise ValueError(
            "node too fast for seamless handover in this cell: "
            f"(tau_b+delta)*v = {(budget.tau_b + budget.delta) * v:g} m >= r2 = {r2:g} m"
        )
    if rss_at_border is None:
        rss_at_border = channel.rss_at_distance(cell, r2)
    f2 = 10.0 * cell.path_loss_exponent
    return float(rss_at_border - f2 * math.log10(arg))


def packet_loss(cell: CellModel, r2: float, v: float, fixed_threshold: float,
                adaptive_threshold: float, rss_at_border: float,
                data_rate: float) -> float:
    """Packets lost per traversal when a fixed threshold fires later than the
    adaptive one.

    (10^((B-fixed)/F2) - 10^((B-adaptive)/F2)) * r2 * rate / v with F2 =
    10*beta, floored at zero: a fixed threshold above the adaptive one only
    wastes WLAN time, it does not drop packets.
    """
    if v <= 0:
        raise ValueError("v must be > 0")
    if data_rate < 0:
        raise ValueError("data_rate must be >= 0")
    f2 = 10.0 * cell.path_loss_exponent
    loss = (
        10.0 ** ((rss_at_border - fixed_threshold) / f2)
        - 10.0 ** ((rss_at_border - adaptive_threshold) / f2)
    ) * r2 * data_rate / v
    return float(max(loss, 0.0))


def _usage_at_radius(r1: float, r2: float, theta: np.ndarray, r_s: float) -> np.ndarray:
    """Per-angle fraction of the chord covered before the RSS trigger fires.

    The trigger fires the first time the node's distance from the AP reaches
    r_s: immediately at entry when it starts at or beyond r_s, at the
    outbound crossing otherwise, and at the exit point when the path never
    reaches r_s.
    """
    chord = traversal_distance(r1, r2, theta)
    chord = np.maximum(chord, 1e-12)
    foot = (r1**2 - r2**2 + chord**2) / (2.0 * chord)
    rc2 = np.maximum(r1**2 - foot**2, 0.0)
    if r1 >= r_s:
        return np.zeros_like(chord)
    cross = foot + np.sqrt(np.maximum(r_s**2 - rc2, 0.0))
    s_trig = np.where(r_s**2 > rc2, np.minimum(cross, chord), chord)
    return s_trig / chord


def wlan_usage_fraction(geom: TriggerGeometry, v: float, tau_d: float,
                        config: TriggerConfig, n: int, rng) -> float:
    """Expected fraction of the in-cell time spent before the trigger fires,
    triggering at the closed-form trigger radius."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r_s = trigger_radius(geom, v, tau_d, config)
    gen = _as_generator(rng)
    theta = PI * (1.0 - np.sqrt(1.0 - gen.random(n)))
    return float(_usage_at_radius(geom.r1, geom.r2, theta, r_s).mean())


def breakdown_divergence_report(points: list[tuple[TriggerGeometry, float, float, float]],
                                n: int, rng) -> list[dict]:
    """Compare the clamped closed-form breakdown against the sampled estimate.

    ``points`` holds (geometry, v, tau_d, r_s) tuples.  Returns one row per
    point with the raw and clamped closed-form values, the sampled estimate,
    and their absolute divergence.  No route is asserted against the other;
    the closed form is reported as-is so its defect stays visible.
    """
    gen = _as_generator(rng)
    rows = []
    for geom, v, tau_d, r_s in points:
        raw = closed_form_breakdown_raw(geom, v, tau_d)
        clamped = breakdown_probability(geom, v, tau_d, r_s,
                                        method=BreakdownMethod.CLOSED_FORM)
        sampled = breakdown_probability(geom, v, tau_d, r_s,
                                        method=BreakdownMethod.SAMPLED, n=n, rng=gen)
        rows.append({
            "r1": geom.r1, "r2": geom.r2, "d_a": geom.d_a, "theta": geom.theta,
            "v": v, "tau_d": tau_d, "r_s": r_s,
            "closed_form_raw": raw, "closed_form_clamped": clamped,
            "sampled": sampled, "divergence": abs(clamped - sampled),
        })
    return rows
