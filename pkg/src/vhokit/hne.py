"""Handover necessity estimation.

Closed-form distributions for the traversal angle and dwell time of a mobile
node crossing a WLAN cell, and the dwell-time thresholds N (unnecessary
handover control) and M (handover failure control) that pin those
probabilities at designed targets.

Geometry: the node enters the cell at distance r1 from the AP and exits at
distance r2, separated by an angle theta at the AP.  Arrival and departure
angles are independent uniforms on [0, pi], making the angle between them a
triangular-tailed distribution with CDF (2*pi - t)*t / pi^2 on [0, pi].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

PI = math.pi

#: Upper bound of the traversal-angle distribution.  Fixed by the model
#: (entry and exit necessarily lie in the same half of the cell).
THETA_BOUND = PI


@dataclass(frozen=True)
class MobilityProfile:
    """Mobile-node kinematics: speed range and entry/exit radii (m)."""

    v_min: float
    v_max: float
    r1: float
    r2: float

    def __post_init__(self):
        if not 0 < self.v_min <= self.v_max:
            raise ValueError("require 0 < v_min <= v_max")
        if self.r1 <= 0 or self.r2 <= 0:
            raise ValueError("entry/exit radii must be > 0")

    @property
    def theta_bound(self) -> float:
        return THETA_BOUND


@dataclass(frozen=True)
class LatencyBudget:
    """Handover latencies (s): moving-in, moving-out, boundary notification,
    and one-way packet delay.  The total latency is always derived, never
    stored."""

    tau_a: float
    tau_d: float
    tau_b: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("tau_a", "tau_d", "tau_b", "delta"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def tau_t(self) -> float:
        """Total handover latency: moving-in plus moving-out."""
        return self.tau_a + self.tau_d


class Decision(enum.Enum):
    NECESSARY = "necessary"
    UNNECESSARY = "unnecessary"


def theta_cdf(theta):
    """CDF of the traversal angle: (2*pi - t)*t / pi^2 on [0, pi]."""
    t = np.asarray(theta, dtype=float)
    out = np.where(t < 0.0, 0.0, np.where(t > PI, 1.0, (2.0 * PI - t) * t / PI**2))
    return float(out) if np.ndim(theta) == 0 else out


def theta_pdf(theta):
    """Density of the traversal angle: 2*(pi - t)/pi^2 on [0, pi], else 0."""
    t = np.asarray(theta, dtype=float)
    inside = (t >= 0.0) & (t <= PI)
    out = np.where(inside, 2.0 * (PI - t) / PI**2, 0.0)
    return float(out) if np.ndim(theta) == 0 else out


def traversal_distance(r1, r2, theta):
    """Chord length between entry and exit points (cosine rule)."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    d2 = r1**2 + r2**2 - 2.0 * r1 * r2 * np.cos(theta)
    out = np.sqrt(np.maximum(d2, 0.0))
    return float(out) if out.ndim == 0 else out


def traversal_time(profile: MobilityProfile, theta, v):
    """Dwell time in the cell: chord length over speed."""
    if np.any(np.asarray(v) <= 0):
        raise ValueError("v must be > 0")
    return traversal_distance(profile.r1, profile.r2, theta) / v


def _chord_angle(r1, r2, t, v):
    """Angle whose chord is covered in time t at speed v, arccos-clamped."""
    arg = (r1**2 + r2**2 - (t * v) ** 2) / (2.0 * r1 * r2)
    return np.arccos(np.clip(arg, -1.0, 1.0))


def dwell_time_cdf(r1, r2, v, t):
    """CDF of the dwell time for fixed radii and speed.

    Composition of the angle CDF with the chord inversion; the clamp makes it
    0 below the support and 1 above it.
    """
    y = _chord_angle(np.asarray(r1, float), np.asarray(r2, float), np.asarray(t, float), v)
    out = (2.0 * PI - y) * y / PI**2
    return float(out) if np.ndim(out) == 0 else out


def traversal_time_pdf(profile: MobilityProfile, v: float, t):
    """Density of the dwell time at speed v.

    4*v^2*t*(pi - arccos(A)) / (pi^2*sqrt(4*r1^2*r2^2 - (r1^2+r2^2-t^2 v^2)^2))
    with A the clamped chord-angle argument.  Returns 0 outside the open
    support (|r1-r2|/v, (r1+r2)/v); the endpoint singularities are integrable.
    """
    if v <= 0:
        raise ValueError("v must be > 0")
    r1, r2 = profile.r1, profile.r2
    t = np.asarray(t, dtype=float)
    lo = abs(r1 - r2) / v
    hi = (r1 + r2) / v
    inside = (t > lo) & (t < hi)
    ts = np.where(inside, t, 0.5 * (lo + hi))
    s = r1**2 + r2**2 - (ts * v) ** 2
    radicand = 4.0 * r1**2 * r2**2 - s**2
    a = np.arccos(np.clip(s / (2.0 * r1 * r2), -1.0, 1.0))
    dens = 4.0 * v**2 * ts * (PI - a) / (PI**2 * np.sqrt(np.maximum(radicand, 1e-300)))
    out = np.where(inside, dens, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def dwell_support(profile: MobilityProfile, v: float) -> tuple[float, float]:
    """Closed support of the dwell time distribution at speed v."""
    return abs(profile.r1 - profile.r2) / v, (profile.r1 + profile.r2) / v


def _check_latency_support(profile, v, latency, what):
    if latency > (profile.r1 + profile.r2) / v:
        raise ValueError(
            f"latency exceeds maximum dwell: {what}={latency:g} s > "
            f"(r1+r2)/v = {(profile.r1 + profile.r2) / v:g} s"
        )


def prob_unnecessary(profile: MobilityProfile, v: float, budget: LatencyBudget,
                     n_threshold: float) -> float:
    """Probability that a handover is unnecessary under threshold N.

    Mass of dwell times in (N, tau_t]: the handover completes but the node
    leaves before the total latency amortizes.
    """
    if v <= 0:
        raise ValueError("v must be > 0")
    tau_t = budget.tau_t
    _check_latency_support(profile, v, tau_t, "tau_a+tau_d")
    if not 0 <= n_threshold <= tau_t:
        raise ValueError("require 0 <= n_threshold <= tau_a+tau_d")
    p = dwell_time_cdf(profile.r1, profile.r2, v, tau_t) - dwell_time_cdf(
        profile.r1, profile.r2, v, n_threshold
    )
    return float(min(max(p, 0.0), 1.0))


def prob_failure(profile: MobilityProfile, v: float, budget: LatencyBudget,
                 m_threshold: float) -> float:
    """Probability of handover failure under threshold M: mass of dwell
    times in (M, tau_a] where the node exits before moving-in completes."""
    if v <= 0:
        raise ValueError("v must be > 0")
    tau_a = budget.tau_a
    _check_latency_support(profile, v, tau_a, "tau_a")
    if not 0 <= m_threshold <= tau_a:
        raise ValueError("require 0 <= m_threshold <= tau_a")
    p = dwell_time_cdf(profile.r1, profile.r2, v, tau_a) - dwell_time_cdf(
        profile.r1, profile.r2, v, m_threshold
    )
    return float(min(max(p, 0.0), 1.0))


def _invert_threshold(profile, v, latency, target, what) -> float:
    """Shared closed-form threshold inversion with root-finding fallback.

    Solves F(threshold) = F(latency) - target for the threshold, via
    y = pi - sqrt((pi - z)^2 + pi^2 * target) with z the chord angle of the
    latency.  Only the minus branch can land in [0, pi]; it is verified by
    forward evaluation and replaced by bracketed root-finding on any
    mismatch.
    """
    r1, r2 = profile.r1, profile.r2
    _check_latency_support(profile, v, latency, what)
    total_mass = dwell_time_cdf(r1, r2, v, latency)
    if target >= total_mass:
        raise ValueError(
            f"target probability {target:g} unachievable: at most {total_mass:g} "
            f"of dwell-time mass lies below {what}={latency:g} s"
        )
    z = _chord_angle(r1, r2, latency, v)
    y = PI - math.sqrt((PI - z) ** 2 + PI**2 * target)
    threshold = None
    if 0.0 <= y <= PI:
        cand = math.sqrt(max(r1**2 + r2**2 - 2.0 * r1 * r2 * math.cos(y), 0.0)) / v
        forward = dwell_time_cdf(r1, r2, v, latency) - dwell_time_cdf(r1, r2, v, cand)
        if abs(forward - target) <= 1e-6:
            threshold = cand
    if threshold is None:
        lo = abs(r1 - r2) / v
        f = lambda t: dwell_time_cdf(r1, r2, v, latency) - dwell_time_cdf(r1, r2, v, t) - target
        threshold = brentq(f, lo, latency, xtol=1e-14, rtol=8.9e-16)
    return float(threshold)


def threshold_unnecessary(profile: MobilityProfile, v: float, budget: LatencyBudget,
                          target_pu: float) -> float:
    """Dwell-time threshold N keeping the unnecessary-handover probability
    at target_pu."""
    if not 0 < target_pu < 1:
        raise ValueError("require 0 < target_pu < 1")
    if v <= 0:
        raise ValueError("v must be > 0")
    return _invert_threshold(profile, v, budget.tau_t, target_pu, "tau_a+tau_d")


def threshold_failure(profile: MobilityProfile, v: float, budget: LatencyBudget,
                      target_pf: float, z_from_total_latency: bool = False) -> float:
    """Dwell-time threshold M keeping the handover-failure probability at
    target_pf.

    ``z_from_total_latency`` switches the inversion intermediate to the total
    latency instead of the moving-in latency; it then solves
    F(M) = F(tau_a+tau_d) - target instead of F(M) = F(tau_a) - target, which
    undershoots the realized failure probability.  Off by default.
    """
    if not 0 < target_pf < 1:
        raise ValueError("require 0 < target_pf < 1")
    if v <= 0:
        raise ValueError("v must be > 0")
    latency = budget.tau_t if z_from_total_latency else budget.tau_a
    m = _invert_threshold(profile, v, latency, target_pf, "tau_a")
    return min(m, budget.tau_a)


def handover_necessary(profile: MobilityProfile, v: float, budget: LatencyBudget,
                       target_pu: float, target_pf: float,
                       predicted_dwell: float) -> Decision:
    """Initiate handover only when the predicted dwell time strictly exceeds
    both thresholds (ties decide against handing over)."""
    n = threshold_unnecessary(profile, v, budget, target_pu)
    m = threshold_failure(profile, v, budget, target_pf)
    if predicted_dwell > max(n, m):
        return Decision.NECESSARY
    return Decision.UNNECESSARY
