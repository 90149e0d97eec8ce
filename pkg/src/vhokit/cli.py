"""Command-line front end.

Four subcommands:

  hne        velocity sweep of unnecessary-handover / failure rates
  htce       velocity sweep of trigger placement, breakdown, usage, loss
  gra        rank candidate networks from a decision-matrix file
  reproduce  emit the bundled figure datasets (4a 4b 4c 4d 4e1 4e 4f)

Scenario files use the ``key = value`` section format documented in
:mod:`vhokit.config`.  Decision matrices are comma-delimited: a header row
(label + attribute names), a direction row (``max`` / ``min`` /
``target:<value>``), an optional ``weights`` row, then one row per
alternative.  All CSV output is comma-delimited UTF-8 with LF line endings
and 9 significant digits, and is byte-reproducible for a fixed seed.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import config, gra, sim

FIGURE_IDS = ("4a", "4b", "4c", "4d", "4e1", "4e", "4f")


def default_scenario_path() -> Path:
    return Path(str(resources.files("vhokit").joinpath("data/default_scenario.cfg")))


def bundled_matrix_path(name: str) -> Path:
    return Path(str(resources.files("vhokit").joinpath(f"data/{name}")))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vhokit",
        description="Vertical-handover decision toolkit: sweeps, ranking, reproduction.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario RNG seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_hne = sub.add_parser("hne", help="handover necessity sweep")
    p_hne.add_argument("config", type=Path, help="scenario config file")
    p_hne.add_argument("--pu", type=float, default=None,
                       help="target unnecessary-handover probability")
    p_hne.add_argument("--pf", type=float, default=None,
                       help="target handover-failure probability")
    p_hne.add_argument("--velocity", type=float, default=None,
                       help="run a single velocity instead of the sweep grid")
    p_hne.add_argument("--out", type=Path, default=None, help="output CSV path")

    p_htce = sub.add_parser("htce", help="handover trigger sweep")
    p_htce.add_argument("config", type=Path, help="scenario config file")
    p_htce.add_argument("--pbreak", type=str, default=None,
                        help="comma-separated breakdown tolerances")
    p_htce.add_argument("--fixed-threshold", type=str, default=None,
                        help="comma-separated fixed RSS thresholds in dBm; "
                             "use the --fixed-threshold=-66,-76 form so the "
                             "leading minus is not read as an option")
    p_htce.add_argument("--out", type=Path, default=None, help="output CSV path")

    p_gra = sub.add_parser("gra", help="grey relational network ranking")
    p_gra.add_argument("matrix", type=Path, help="decision matrix file")
    p_gra.add_argument("--zeta", type=float, default=0.5,
                       help="distinguishing coefficient (default 0.5)")
    p_gra.add_argument("--weights", type=str, default="equal",
                       help='"equal" or comma-separated attribute weights')
    p_gra.add_argument("--out", type=Path, default=None, help="write tables to this file")

    p_rep = sub.add_parser("reproduce", help="emit bundled figure datasets")
    p_rep.add_argument("--figure", required=True,
                       help=f"figure id, one of: {', '.join(FIGURE_IDS)}")
    p_rep.add_argument("--out", type=Path, default=Path("."),
                       help="output directory (default: current)")
    p_rep.add_argument("--trials", type=int, default=None,
                       help="override trials per sweep point")
    return parser


def _parse_float_list(text: str, what: str) -> list[float]:
    items = [t for t in text.replace(",", " ").split() if t]
    if not items:
        raise ValueError(f"empty {what} list")
    return [float(t) for t in items]


def cmd_hne(args) -> int:
    overrides = {}
    if args.pu is not None:
        overrides["target_pu"] = args.pu
    if args.pf is not None:
        overrides["target_pf"] = args.pf
    if args.velocity is not None:
        if args.velocity <= 0:
            raise ValueError("v > 0 required")
        overrides["values"] = (args.velocity,)
    if args.seed is not None:
        overrides["seed"] = args.seed
    scenario = config.load_scenario(args.config, **overrides)
    summary = sim.run_hne_sweep(scenario)
    out = args.out or Path("hne_sweep.csv")
    summary.save(out)
    print(f"wrote {out}")
    return 0


def cmd_htce(args) -> int:
    overrides = {}
    if args.fixed_threshold is not None:
        overrides["fixed_thresholds_dbm"] = tuple(
            _parse_float_list(args.fixed_threshold, "fixed-threshold"))
    if args.seed is not None:
        overrides["seed"] = args.seed
    base = config.load_scenario(args.config, **overrides)
    if args.pbreak is not None:
        targets = _parse_float_list(args.pbreak, "pbreak")
    else:
        targets = [base.trigger.p_break_target]
    blocks = []
    for target in targets:
        scenario = config.load_scenario(
            args.config, p_break_target=target, **overrides)
        blocks.append(sim.run_htce_sweep(scenario))
    merged = sim.SimSummary("htce", blocks[0].columns)
    for block in blocks:
        merged.points.extend(block.points)
    out = args.out or Path("htce_sweep.csv")
    merged.save(out)
    print(f"wrote {out}")
    return 0


def _format_table(title: str, row_names, col_names, grid) -> str:
    width = max(12, max(len(str(r)) for r in row_names) + 2)
    lines = [title]
    lines.append(" " * width + "".join(f"{c:>12}" for c in col_names))
    for name, row in zip(row_names, grid):
        lines.append(f"{name:<{width}}" + "".join(f"{v:>12.4f}" for v in row))
    return "\n".join(lines)


def cmd_gra(args) -> int:
    matrix = gra.load_decision_matrix(args.matrix)
    if args.weights.strip().lower() == "equal":
        weights = np.full(len(matrix.attributes), 1.0 / len(matrix.attributes))
    else:
        weights = np.array(_parse_float_list(args.weights, "weights"))
        if weights.shape != (len(matrix.attributes),):
            raise ValueError(
                f"expected {len(matrix.attributes)} weights, got {weights.size}")
    result = gra.rank(matrix, zeta=args.zeta, weights=weights)
    attr_names = [a.name for a in matrix.attributes]
    parts = [
        _format_table("Normalized decision matrix", matrix.alternatives,
                      attr_names, result.normalized),
        "",
        _format_table("Grey relational coefficients", matrix.alternatives,
                      attr_names, result.coefficients),
        "",
        _format_table("Grades", matrix.alternatives, ["grade"],
                      result.grades.reshape(-1, 1)),
        "",
        "Ranking: " + " > ".join(result.ranking),
    ]
    text = "\n".join(parts)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    return 0


def _figure_scenario(figure: str, seed: int | None, trials: int | None):
    """Documented parameter sets behind each figure dataset."""
    path = default_scenario_path()
    common = {}
    if seed is not None:
        common["seed"] = seed
    if trials is not None:
        common["trials_per_point"] = trials
    if figure in ("4a", "4b"):
        return config.load_scenario(
            path, values=tuple(float(v) for v in range(2, 31, 2)), **common)
    if figure in ("4c", "4d"):
        return config.load_scenario(
            path, values=tuple(float(v) for v in range(2, 31, 4)), **common)
    if figure == "4e1":
        # Reference parameters for this dataset: exit radius 50 +/- 5 m,
        # 60 packets/s, path-loss exponent 3.
        cfg = config.parse_config_text(path.read_text(), origin=str(path))
        cfg["cell"]["sigma_radius"] = 5.0
        cfg["cell"]["path_loss_exponent"] = 3.0
        cfg["trigger"]["data_rate"] = 60.0
        overrides = dict(values=tuple(float(v) for v in range(2, 31, 4)), **common)
        return config.scenario_from_config(cfg, **overrides)
    raise ValueError(f"no scenario for figure {figure}")


def _gra_figure_rows(matrix_file: str) -> list[str]:
    matrix = gra.load_decision_matrix(bundled_matrix_path(matrix_file))
    lines = ["zeta,alternative,grade,rank"]
    for zeta in (0.3, 0.5, 0.7):
        result = gra.rank(matrix, zeta=zeta)
        position = {name: k + 1 for k, name in enumerate(result.ranking)}
        for name, grade in zip(matrix.alternatives, result.grades):
            lines.append(f"{zeta:.9g},{name},{grade:.9g},{position[name]}")
    return lines


def cmd_reproduce(args) -> int:
    figure = args.figure
    if figure not in FIGURE_IDS:
        raise ValueError(
            f"unknown figure id {figure!r}; valid ids: {', '.join(FIGURE_IDS)}")
    args.out.mkdir(parents=True, exist_ok=True)
    out = args.out / f"figure_{figure}.csv"
    if figure in ("4a", "4b"):
        summary = sim.run_hne_sweep(_figure_scenario(figure, args.seed, args.trials))
        summary.save(out)
    elif figure in ("4c", "4d", "4e1"):
        base = _figure_scenario(figure, args.seed, args.trials)
        targets = (0.02, 0.3, 0.7) if figure in ("4c", "4d") else (base.trigger.p_break_target,)
        merged = None
        for target in targets:
            scenario = config.scenario_from_config(
                _scenario_to_cfg(base), p_break_target=target)
            block = sim.run_htce_sweep(scenario)
            if merged is None:
                merged = sim.SimSummary("htce", block.columns)
            merged.points.extend(block.points)
        merged.save(out)
    else:
        rows = _gra_figure_rows(
            "case_study_1_normalized.csv" if figure == "4e" else "case_study_2.csv")
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(rows) + "\n")
    print(f"wrote {out}")
    return 0


def _scenario_to_cfg(scenario: sim.Scenario) -> dict:
    """Parsed-config dict equivalent of a scenario (for derived runs)."""
    c, m, b, t = scenario.cell, scenario.mobility, scenario.budget, scenario.trigger
    return {
        "cell": {
            "mean_radius": c.mean_radius, "sigma_radius": c.sigma_radius,
            "tx_power_dbm": c.tx_power_dbm, "ref_distance": c.ref_distance,
            "ref_path_loss_db": c.ref_path_loss_db,
            "path_loss_exponent": c.path_loss_exponent,
            "shadow_sigma_db": c.shadow_sigma_db,
        },
        "mobility": {"v_min": m.v_min, "v_max": m.v_max, "r1": m.r1, "r2": m.r2},
        "latency": {"tau_a": b.tau_a, "tau_d": b.tau_d, "tau_b": b.tau_b,
                    "delta": b.delta},
        "trigger": {"p_break_target": t.p_break_target,
                    "channel_adjustment": t.channel_adjustment,
                    "chi": t.chi, "data_rate": t.data_rate},
        "sweep": {
            "parameter": scenario.sweep_parameter,
            "values": scenario.sweep_values,
            "trials_per_point": scenario.trials_per_point,
            "seed": scenario.seed,
            "target_pu": scenario.target_pu,
            "target_pf": scenario.target_pf,
            "threshold_policy": scenario.threshold_policy,
            "radius_coupling": scenario.radius_coupling,
            "trigger_rule": scenario.trigger_rule,
            "fixed_thresholds_dbm": scenario.fixed_thresholds_dbm,
        },
        "gra": {"zeta": 0.5, "weights": "equal"},
    }


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"hne": cmd_hne, "htce": cmd_htce, "gra": cmd_gra,
                "reproduce": cmd_reproduce}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
