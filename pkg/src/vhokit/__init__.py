"""Vertical-handover decision toolkit.

Closed-form engines for handover necessity (dwell-time thresholds), handover
triggering (trigger radius and RSS thresholds), and target selection (grey
relational ranking), validated by a deterministic Monte-Carlo harness over a
shadow-faded WLAN cell model.
"""
from . import channel, gra, hne, htce, sim
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["channel", "hne", "htce", "gra", "sim", "KERNEL_BACKEND", "__version__"]
