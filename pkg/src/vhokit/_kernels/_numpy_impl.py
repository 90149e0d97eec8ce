"""Vectorized numpy implementation of the per-trial sweep kernels.

This is the fallback backend; the compiled extension in ``_mc_core`` mirrors
these semantics trial by trial.  Both consume pre-drawn radius/angle arrays
so random-number consumption is identical across backends.
"""
from __future__ import annotations

import numpy as np

PI = np.pi


def dwell_times(r1, r2, theta, v):
    """Per-trial dwell time: chord(r1, r2, theta) / v."""
    d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * np.cos(theta)
    return np.sqrt(np.maximum(d2, 0.0)) / v


def _clamped_threshold(r1, r2, v, latency, target):
    """Per-trial closed-form dwell threshold, clamped into the support.

    When the target is unachievable for a trial's radii the clamp drives the
    threshold to the support minimum (the trial then contributes its whole
    lower-tail mass instead of the target).
    """
    arg = (r1 * r1 + r2 * r2 - (latency * v) ** 2) / (2.0 * r1 * r2)
    z = np.arccos(np.clip(arg, -1.0, 1.0))
    y = PI - np.sqrt((PI - z) ** 2 + PI * PI * target)
    y = np.clip(y, 0.0, PI)
    d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * np.cos(y)
    return np.sqrt(np.maximum(d2, 0.0)) / v


def hne_flags_adaptive(r1, r2, dwell, v, tau_t, tau_a, target_pu, target_pf):
    """Unnecessary/failure flags with thresholds recomputed per trial from
    that trial's radii."""
    n_thr = _clamped_threshold(r1, r2, v, tau_t, target_pu)
    m_thr = _clamped_threshold(r1, r2, v, tau_a, target_pf)
    flag_u = ((dwell > n_thr) & (dwell <= tau_t)).astype(np.uint8)
    flag_f = ((dwell > m_thr) & (dwell <= tau_a)).astype(np.uint8)
    return flag_u, flag_f


def hne_flags_fixed(dwell, n_threshold, m_threshold, tau_t, tau_a):
    """Unnecessary/failure flags against fixed design thresholds."""
    flag_u = ((dwell > n_threshold) & (dwell <= tau_t)).astype(np.uint8)
    flag_f = ((dwell > m_threshold) & (dwell <= tau_a)).astype(np.uint8)
    return flag_u, flag_f


def htce_trials(r1, r2, theta, v, r_s, tau_d):
    """Per-trial trigger outcome under the radial boundary model.

    The node hands over once its remaining radial margin to the (realized)
    exit boundary shrinks to r2 - r_s; the boundary span actually flown is
    capped by the chord.  Breakdown occurs when the realized exit radius
    falls inside the trigger radius plus the moving-out flight r_s + tau_d*v.
    """
    d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * np.cos(theta)
    chord = np.sqrt(np.maximum(d2, 0.0))
    gap_raw = r2 - r_s
    gap_in = np.clip(gap_raw, 0.0, None)
    gap_in = np.minimum(gap_in, chord)
    safe_chord = np.where(chord > 0.0, chord, 1.0)
    usage = np.where(
        chord > 0.0,
        1.0 - gap_in / safe_chord,
        np.where(gap_raw > 0.0, 0.0, 1.0),
    )
    breakdown = (r2 < r_s + tau_d * v).astype(np.uint8)
    return usage, breakdown, gap_in
