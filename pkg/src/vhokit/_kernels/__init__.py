"""Monte-Carlo trial kernels with a compiled fast path.

The compiled Cython extension is preferred when it has been built; otherwise
the vectorized numpy implementation is used.  Selection happens once at
import and can be forced with the ``VHOKIT_BACKEND`` environment variable
("compiled" or "numpy").  Both backends consume identical pre-drawn input
arrays, so a scenario's random draws do not depend on the backend.
"""
from __future__ import annotations

import os

from . import _numpy_impl

_BACKENDS = {"numpy": _numpy_impl}
try:
    from . import _mc_core

    _BACKENDS["compiled"] = _mc_core
except ImportError:
    _mc_core = None


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str):
    """Return the kernel module for an explicit backend name."""
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}"
        ) from None


def _select() -> str:
    forced = os.environ.get("VHOKIT_BACKEND", "").strip().lower()
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"VHOKIT_BACKEND={forced!r} requested but not available; "
                f"built backends: {', '.join(available_backends())}"
            )
        return forced
    return "compiled" if "compiled" in _BACKENDS else "numpy"


BACKEND = _select()
_active = _BACKENDS[BACKEND]

dwell_times = _active.dwell_times
hne_flags_adaptive = _active.hne_flags_adaptive
hne_flags_fixed = _active.hne_flags_fixed
htce_trials = _active.htce_trials
