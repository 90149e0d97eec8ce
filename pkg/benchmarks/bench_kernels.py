"""Benchmark the compiled Monte-Carlo kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--trials N] [--repeats K]

Times the three per-trial kernels on identical pre-drawn inputs and reports
the best-of-K wall time per backend plus the speedup.  Builds nothing: if the
compiled extension is absent only the numpy column is shown.
"""
import argparse
import time

import numpy as np

from vhokit import _kernels
from vhokit.channel import RngStream


def draw_inputs(n: int):
    gen = RngStream(404).generator()
    r1 = np.abs(gen.normal(50.0, 3.0, n))
    r2 = np.abs(gen.normal(50.0, 3.0, n))
    theta = np.pi * (1.0 - np.sqrt(1.0 - gen.random(n)))
    return r1, r2, theta


def time_call(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    r1, r2, theta = draw_inputs(args.trials)
    backends = {name: _kernels.get_backend(name)
                for name in _kernels.available_backends()}
    dwell = backends["numpy"].dwell_times(r1, r2, theta, 10.0)

    cases = {
        "dwell_times": lambda mod: mod.dwell_times(r1, r2, theta, 10.0),
        "hne_flags_adaptive": lambda mod: mod.hne_flags_adaptive(
            r1, r2, dwell, 10.0, 2.0, 1.9, 0.02, 0.02),
        "htce_trials": lambda mod: mod.htce_trials(r1, r2, theta, 10.0, 42.8, 0.1),
    }

    print(f"trials per call: {args.trials:,}   best of {args.repeats} runs")
    header = f"{'kernel':<22}" + "".join(f"{name:>14}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for case, call in cases.items():
        times = {name: time_call(lambda m=mod: call(m), args.repeats)
                 for name, mod in backends.items()}
        row = f"{case:<22}" + "".join(f"{times[name] * 1e3:>11.1f} ms" for name in backends)
        if "compiled" in times and "numpy" in times:
            row += f"{times['numpy'] / times['compiled']:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
