# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled per-trial kernels for the Monte-Carlo sweeps.

Trial-by-trial mirror of ``_numpy_impl``; both backends consume identical
pre-drawn input arrays, so switching backends never changes which random
numbers a trial sees.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport acos, cos, sqrt

cdef double PI = 3.141592653589793238462643383279502884


def dwell_times(double[::1] r1, double[::1] r2, double[::1] theta, double v):
    cdef Py_ssize_t n = r1.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef double d2
    for i in range(n):
        d2 = r1[i] * r1[i] + r2[i] * r2[i] - 2.0 * r1[i] * r2[i] * cos(theta[i])
        if d2 < 0.0:
            d2 = 0.0
        o[i] = sqrt(d2) / v
    return out


cdef inline double _clamped_threshold(double a, double b, double v,
                                      double latency, double target) noexcept nogil:
    cdef double arg = (a * a + b * b - latency * latency * v * v) / (2.0 * a * b)
    cdef double z, y, d2
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    z = acos(arg)
    y = PI - sqrt((PI - z) * (PI - z) + PI * PI * target)
    if y < 0.0:
        y = 0.0
    elif y > PI:
        y = PI
    d2 = a * a + b * b - 2.0 * a * b * cos(y)
    if d2 < 0.0:
        d2 = 0.0
    return sqrt(d2) / v


def hne_flags_adaptive(double[::1] r1, double[::1] r2, double[::1] dwell,
                       double v, double tau_t, double tau_a,
                       double target_pu, double target_pf):
    cdef Py_ssize_t n = r1.shape[0]
    flag_u = np.empty(n, dtype=np.uint8)
    flag_f = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] fu = flag_u
    cdef unsigned char[::1] ff = flag_f
    cdef Py_ssize_t i
    cdef double n_thr, m_thr, t
    for i in range(n):
        n_thr = _clamped_threshold(r1[i], r2[i], v, tau_t, target_pu)
        m_thr = _clamped_threshold(r1[i], r2[i], v, tau_a, target_pf)
        t = dwell[i]
        fu[i] = 1 if (t > n_thr and t <= tau_t) else 0
        ff[i] = 1 if (t > m_thr and t <= tau_a) else 0
    return flag_u, flag_f


def hne_flags_fixed(double[::1] dwell, double n_threshold, double m_threshold,
                    double tau_t, double tau_a):
    cdef Py_ssize_t n = dwell.shape[0]
    flag_u = np.empty(n, dtype=np.uint8)
    flag_f = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] fu = flag_u
    cdef unsigned char[::1] ff = flag_f
    cdef Py_ssize_t i
    cdef double t
    for i in range(n):
        t = dwell[i]
        fu[i] = 1 if (t > n_threshold and t <= tau_t) else 0
        ff[i] = 1 if (t > m_threshold and t <= tau_a) else 0
    return flag_u, flag_f


def htce_trials(double[::1] r1, double[::1] r2, double[::1] theta,
                double v, double r_s, double tau_d):
    cdef Py_ssize_t n = r1.shape[0]
    usage = np.empty(n, dtype=np.float64)
    breakdown = np.empty(n, dtype=np.uint8)
    gap = np.empty(n, dtype=np.float64)
    cdef double[::1] us = usage
    cdef unsigned char[::1] bk = breakdown
    cdef double[::1] gp = gap
    cdef Py_ssize_t i
    cdef double d2, chord, gap_raw, gap_in
    for i in range(n):
        d2 = r1[i] * r1[i] + r2[i] * r2[i] - 2.0 * r1[i] * r2[i] * cos(theta[i])
        if d2 < 0.0:
            d2 = 0.0
        chord = sqrt(d2)
        gap_raw = r2[i] - r_s
        gap_in = gap_raw if gap_raw > 0.0 else 0.0
        if gap_in > chord:
            gap_in = chord
        if chord > 0.0:
            us[i] = 1.0 - gap_in / chord
        else:
            us[i] = 0.0 if gap_raw > 0.0 else 1.0
        bk[i] = 1 if r2[i] < r_s + tau_d * v else 0
        gp[i] = gap_in
    return usage, breakdown, gap
