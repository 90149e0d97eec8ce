"""Monte-Carlo scenario runner.

Sweeps mobile-node velocity across many sampled traversals of the stochastic
cell and aggregates the handover statistics: empirical unnecessary/failure
probabilities against their designed targets, trigger placement, breakdown
and WLAN-usage rates, and packet loss for fixed RSS thresholds.

Determinism: every sweep point owns a counter-based substream derived from
the scenario seed and the point index, trials inside a point consume draws in
a fixed order, and aggregation is a plain sum, so results are bit-identical
for a given seed no matter how points are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, htce
from .channel import CellModel, RngStream, _as_generator, sample_radii
from .hne import (
    LatencyBudget,
    MobilityProfile,
    dwell_time_cdf,
    threshold_failure,
    threshold_unnecessary,
)
from .htce import TriggerConfig

PI = math.pi

THRESHOLD_POLICIES = ("per_trial", "design")
RADIUS_COUPLINGS = ("independent", "equal")
TRIGGER_RULES = ("design", "literal")


@dataclass(frozen=True)
class Scenario:
    """One reproducible experiment: models, sweep grid, and design targets.

    ``threshold_policy`` selects whether the node recomputes its dwell
    thresholds from each traversal's estimated radii ("per_trial") or keeps
    the thresholds designed for the profile radii ("design").
    ``radius_coupling`` draws entry and exit radii independently
    ("independent") or as one draw per traversal ("equal", the ideal-circle
    comparison).  ``trigger_rule`` picks the trigger-radius source for the
    outbound sweep: the shadow-fading design rule ("design") or the
    closed-form expression ("literal").
    """

    cell: CellModel
    mobility: MobilityProfile
    budget: LatencyBudget
    trigger: TriggerConfig
    sweep_values: tuple[float, ...]
    trials_per_point: int = 1_000_000
    seed: int = 0
    sweep_parameter: str = "velocity"
    target_pu: float = 0.02
    target_pf: float = 0.02
    threshold_policy: str = "per_trial"
    radius_coupling: str = "independent"
    trigger_rule: str = "design"
    fixed_thresholds_dbm: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(
            self, "fixed_thresholds_dbm", tuple(float(v) for v in self.fixed_thresholds_dbm)
        )
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if not self.sweep_values:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.sweep_values, self.sweep_values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if self.sweep_parameter != "velocity":
            raise ValueError("only velocity sweeps are supported")
        if any(v <= 0 for v in self.sweep_values):
            raise ValueError("velocities must be > 0")
        if self.threshold_policy not in THRESHOLD_POLICIES:
            raise ValueError(f"threshold_policy must be one of {THRESHOLD_POLICIES}")
        if self.radius_coupling not in RADIUS_COUPLINGS:
            raise ValueError(f"radius_coupling must be one of {RADIUS_COUPLINGS}")
        if self.trigger_rule not in TRIGGER_RULES:
            raise ValueError(f"trigger_rule must be one of {TRIGGER_RULES}")
        if not 0 < self.target_pu < 1 or not 0 < self.target_pf < 1:
            raise ValueError("design targets must lie in (0, 1)")


def theta_sampler(rng) -> float:
    """One traversal angle via the closed-form inverse CDF.

    Solving u = (2*pi - t)*t / pi^2 for t gives the quadratic roots
    pi*(1 +/- sqrt(1 - u)); only the minus root lies in [0, pi], hence
    theta = pi * (1 - sqrt(1 - u)) with u uniform on [0, 1).
    """
    gen = _as_generator(rng)
    return float(PI * (1.0 - math.sqrt(1.0 - gen.random())))


def theta_samples(rng, n: int) -> np.ndarray:
    """Vectorized inverse-CDF traversal-angle draws (see theta_sampler)."""
    gen = _as_generator(rng)
    return PI * (1.0 - np.sqrt(1.0 - gen.random(n)))


def _stderr_mean(x: np.ndarray) -> float:
    n = x.size
    if n < 2:
        return float("nan")
    return float(x.std(ddof=1) / math.sqrt(n))


def _stderr_bernoulli(p: float, n: int) -> float:
    if n < 2:
        return float("nan")
    return math.sqrt(p * (1.0 - p) / n)


def _draw_trial_inputs(scenario: Scenario, point_index: int, counters: dict):
    """Radii and angles for one sweep point, from that point's substream."""
    gen = RngStream(scenario.seed, point_index + 1).generator()
    n = scenario.trials_per_point
    r1 = sample_radii(scenario.cell, gen, n, counters)
    if scenario.radius_coupling == "independent":
        r2 = sample_radii(scenario.cell, gen, n, counters)
    else:
        r2 = r1.copy()
    theta = theta_samples(gen, n)
    return r1, r2, theta


@dataclass
class HnePoint:
    velocity: float
    n_design: float = float("nan")
    m_design: float = float("nan")
    pu_closed: float = float("nan")
    pf_closed: float = float("nan")
    pu_empirical: float = float("nan")
    pu_stderr: float = float("nan")
    pf_empirical: float = float("nan")
    pf_stderr: float = float("nan")
    trials: int = 0
    unachievable_pu_trials: int = 0
    unachievable_pf_trials: int = 0
    radius_rejections: int = 0
    error: str = ""

    COLUMNS = (
        "velocity", "n_design", "m_design", "pu_closed", "pf_closed",
        "pu_empirical", "pu_stderr", "pf_empirical", "pf_stderr", "trials",
        "unachievable_pu_trials", "unachievable_pf_trials",
        "radius_rejections", "error",
    )

    def row(self):
        return [getattr(self, c) for c in self.COLUMNS]


@dataclass
class HtcePoint:
    velocity: float
    p_break_target: float
    trigger_radius: float = float("nan")
    mean_trigger_distance: float = float("nan")
    breakdown_empirical: float = float("nan")
    breakdown_stderr: float = float("nan")
    usage_mean: float = float("nan")
    usage_stderr: float = float("nan")
    packet_loss: tuple = ()
    trials: int = 0
    usage_clamped_trials: int = 0
    radius_rejections: int = 0
    error: str = ""

    BASE_COLUMNS = (
        "velocity", "p_break_target", "trigger_radius", "mean_trigger_distance",
        "breakdown_empirical", "breakdown_stderr", "usage_mean", "usage_stderr",
    )
    TAIL_COLUMNS = ("trials", "usage_clamped_trials", "radius_rejections", "error")

    def row(self):
        head = [getattr(self, c) for c in self.BASE_COLUMNS]
        tail = [getattr(self, c) for c in self.TAIL_COLUMNS]
        return head + list(self.packet_loss) + tail


@dataclass
class SimSummary:
    """Aggregated sweep results: one row per sweep point plus counters."""

    kind: str
    columns: list[str]
    points: list = field(default_factory=list)

    def rows(self):
        return [p.row() for p in self.points]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows():
            lines.append(",".join(_format_cell(c) for c in row))
        return "\n".join(lines) + "\n"

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.9g}"


def run_hne_sweep(scenario: Scenario) -> SimSummary:
    """Velocity sweep of empirical unnecessary-handover and failure rates.

    Each trial samples a traversal (radii and angle), takes its dwell time,
    and checks it against the dwell thresholds: a handover that would have
    been initiated (dwell above threshold) counts as unnecessary when the
    dwell still sits below the total latency, and as failed when it sits
    below the moving-in latency.  Closed-form design thresholds for the
    profile radii are reported alongside; a point whose design threshold does
    not exist is recorded with its error and skipped.
    """
    profile, budget = scenario.mobility, scenario.budget
    tau_t, tau_a = budget.tau_t, budget.tau_a
    summary = SimSummary("hne", list(HnePoint.COLUMNS))
    for i, v in enumerate(scenario.sweep_values):
        point = HnePoint(velocity=v)
        summary.points.append(point)
        try:
            point.n_design = threshold_unnecessary(profile, v, budget, scenario.target_pu)
            point.m_design = threshold_failure(profile, v, budget, scenario.target_pf)
            point.pu_closed = (
                dwell_time_cdf(profile.r1, profile.r2, v, tau_t)
                - dwell_time_cdf(profile.r1, profile.r2, v, point.n_design)
            )
            point.pf_closed = (
                dwell_time_cdf(profile.r1, profile.r2, v, tau_a)
                - dwell_time_cdf(profile.r1, profile.r2, v, point.m_design)
            )
        except ValueError as exc:
            point.error = str(exc)
            if scenario.threshold_policy == "design":
                continue
        counters: dict = {}
        r1, r2, theta = _draw_trial_inputs(scenario, i, counters)
        dwell = _kernels.dwell_times(r1, r2, theta, v)
        if scenario.threshold_policy == "per_trial":
            flag_u, flag_f = _kernels.hne_flags_adaptive(
                r1, r2, dwell, v, tau_t, tau_a, scenario.target_pu, scenario.target_pf
            )
            point.unachievable_pu_trials = int(
                (dwell_time_cdf(r1, r2, v, tau_t) < scenario.target_pu).sum()
            )
            point.unachievable_pf_trials = int(
                (dwell_time_cdf(r1, r2, v, tau_a) < scenario.target_pf).sum()
            )
        else:
            flag_u, flag_f = _kernels.hne_flags_fixed(
                dwell, point.n_design, point.m_design, tau_t, tau_a
            )
        n = scenario.trials_per_point
        point.trials = n
        point.pu_empirical = float(flag_u.sum()) / n
        point.pf_empirical = float(flag_f.sum()) / n
        point.pu_stderr = _stderr_bernoulli(point.pu_empirical, n)
        point.pf_stderr = _stderr_bernoulli(point.pf_empirical, n)
        point.radius_rejections = counters.get("radius_rejections", 0)
    return summary


def design_geometry(profile: MobilityProfile) -> htce.TriggerGeometry:
    """Reference traversal used by the literal trigger rule: right-angle
    crossing with the reference point at the perpendicular foot."""
    chord = math.sqrt(profile.r1**2 + profile.r2**2)
    d_a = (profile.r1**2 - profile.r2**2 + chord**2) / (2.0 * chord)
    return htce.TriggerGeometry(profile.r1, profile.r2, d_a, PI / 2.0)


def _htce_columns(scenario: Scenario) -> list[str]:
    cols = list(HtcePoint.BASE_COLUMNS)
    cols += [f"packet_loss_fixed_{t:g}dBm" for t in scenario.fixed_thresholds_dbm]
    cols += list(HtcePoint.TAIL_COLUMNS)
    return cols


def run_htce_sweep(scenario: Scenario) -> SimSummary:
    """Velocity sweep of trigger placement, breakdown rate, WLAN usage, and
    packet loss at the scenario's breakdown tolerance.

    Per trial, the node fires its handover once the remaining radial margin
    to the realized exit boundary reaches r2 - r_s; usage is the chord
    fraction covered before that, and breakdown occurs when the realized
    boundary sits inside r_s plus the moving-out flight tau_d * v.
    """
    cell, budget, cfg = scenario.cell, scenario.budget, scenario.trigger
    p_target = cfg.p_break_target
    summary = SimSummary("htce", _htce_columns(scenario))
    n = scenario.trials_per_point
    f2 = 10.0 * cell.path_loss_exponent
    notif = budget.tau_b + budget.delta
    for i, v in enumerate(scenario.sweep_values):
        point = HtcePoint(velocity=v, p_break_target=p_target,
                          packet_loss=(float("nan"),) * len(scenario.fixed_thresholds_dbm))
        summary.points.append(point)
        try:
            if scenario.trigger_rule == "design":
                r_s = htce.trigger_radius_for_target(cell, v, budget.tau_d, p_target)
            else:
                r_s = htce.trigger_radius(design_geometry(scenario.mobility), v,
                                          budget.tau_d, cfg)
        except ValueError as exc:
            point.error = str(exc)
            continue
        point.trigger_radius = r_s
        counters: dict = {}
        r1, r2, theta = _draw_trial_inputs(scenario, i, counters)
        usage, breakdown, gap = _kernels.htce_trials(r1, r2, theta, v, r_s, budget.tau_d)
        point.trials = n
        point.mean_trigger_distance = float(gap.mean())
        point.breakdown_empirical = float(breakdown.sum()) / n
        point.breakdown_stderr = _stderr_bernoulli(point.breakdown_empirical, n)
        point.usage_mean = float(usage.mean())
        point.usage_stderr = _stderr_mean(usage)
        point.usage_clamped_trials = int(((r2 - r_s < 0.0) | (r2 - r_s > gap + 1e-12)).sum())
        point.radius_rejections = counters.get("radius_rejections", 0)
        if scenario.fixed_thresholds_dbm:
            border = (
                cell.tx_power_dbm - cell.ref_path_loss_db
                - f2 * np.log10(np.maximum(r2, cell.ref_distance) / cell.ref_distance)
            )
            log_arg = 1.0 - notif * v / r2
            # Trials where the notification flight exceeds the cell or the
            # realized radius sits inside the reference distance have no
            # defined threshold; they are excluded from the mean.
            ok = (log_arg > 0.0) & (r2 >= cell.ref_distance)
            adaptive = border - f2 * np.log10(np.where(ok, log_arg, 1.0))
            losses = []
            for fixed in scenario.fixed_thresholds_dbm:
                per_trial = (
                    10.0 ** ((border - fixed) / f2)
                    - 10.0 ** ((border - adaptive) / f2)
                ) * r2 * cfg.data_rate / v
                per_trial = np.where(ok, np.maximum(per_trial, 0.0), np.nan)
                losses.append(float(np.nanmean(per_trial)))
            point.packet_loss = tuple(losses)
    return summary
