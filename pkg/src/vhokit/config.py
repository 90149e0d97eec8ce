"""Scenario configuration files.

Plain-text format: ``[section]`` headers, one ``key = value`` pair per line,
``#`` starts a comment.  Unknown sections or keys are errors (naming the
offender); missing keys fall back to documented defaults, except the few
required ones, whose error message lists what can be defaulted.  A dumped
effective config (defaults materialized) re-parses to the identical scenario.

Sections and units:

  [cell]      mean_radius/sigma_radius (m), tx_power_dbm (dBm),
              ref_distance (m), ref_path_loss_db (dB), path_loss_exponent,
              shadow_sigma_db (dB)
  [mobility]  v_min/v_max (m/s), r1/r2 (m)
  [latency]   tau_a/tau_d/tau_b/delta (s)
  [trigger]   p_break_target, channel_adjustment (m^2), chi, data_rate (pkt/s)
  [sweep]     parameter, values (m/s list), trials_per_point, seed,
              target_pu/target_pf, threshold_policy, radius_coupling,
              trigger_rule, fixed_thresholds_dbm (dBm list)
  [gra]       zeta, weights ("equal" or a list)
"""
from __future__ import annotations

from dataclasses import dataclass

from .channel import CellModel
from .hne import LatencyBudget, MobilityProfile
from .htce import TriggerConfig
from .sim import Scenario


@dataclass(frozen=True)
class _Field:
    kind: str  # "float" | "int" | "str" | "floats"
    default: object = None
    required: bool = False
    choices: tuple = ()


_SCHEMA: dict[str, dict[str, _Field]] = {
    "cell": {
        "mean_radius": _Field("float", required=True),
        "sigma_radius": _Field("float", 0.0),
        "tx_power_dbm": _Field("float", 20.0),
        "ref_distance": _Field("float", 1.0),
        "ref_path_loss_db": _Field("float", 40.0),
        "path_loss_exponent": _Field("float", 3.0),
        "shadow_sigma_db": _Field("float", 0.0),
    },
    "mobility": {
        "v_min": _Field("float", 1.0),
        "v_max": _Field("float", 30.0),
        "r1": _Field("float", 50.0),
        "r2": _Field("float", 50.0),
    },
    "latency": {
        "tau_a": _Field("float", 1.9),
        "tau_d": _Field("float", 0.1),
        "tau_b": _Field("float", 0.04),
        "delta": _Field("float", 0.01),
    },
    "trigger": {
        "p_break_target": _Field("float", 0.02),
        "channel_adjustment": _Field("float", 0.0),
        "chi": _Field("float", 0.5),
        "data_rate": _Field("float", 60.0),
    },
    "sweep": {
        "parameter": _Field("str", "velocity", choices=("velocity",)),
        "values": _Field("floats", (10.0, 15.0, 20.0, 25.0, 30.0)),
        "trials_per_point": _Field("int", 1_000_000),
        "seed": _Field("int", 12345),
        "target_pu": _Field("float", 0.02),
        "target_pf": _Field("float", 0.02),
        "threshold_policy": _Field("str", "per_trial", choices=("per_trial", "design")),
        "radius_coupling": _Field("str", "independent", choices=("independent", "equal")),
        "trigger_rule": _Field("str", "design", choices=("design", "literal")),
        "fixed_thresholds_dbm": _Field("floats", ()),
    },
    "gra": {
        "zeta": _Field("float", 0.5),
        "weights": _Field("str", "equal"),
    },
}


class ConfigError(ValueError):
    pass


def parse_config_text(text: str, origin: str = "<config>") -> dict:
    """Parse raw ``key = value`` sections, validating against the schema."""
    raw: dict[str, dict[str, str]] = {}
    section = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(
                    f"{origin}:{lineno}: unknown section [{section}]; "
                    f"expected one of {', '.join(sorted(_SCHEMA))}"
                )
            raw.setdefault(section, {})
            continue
        if "=" not in stripped:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {stripped!r}")
        if section is None:
            raise ConfigError(f"{origin}:{lineno}: key outside any [section]")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA[section]:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r} in [{section}]")
        if key in raw[section]:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r} in [{section}]")
        raw[section][key] = value

    parsed: dict[str, dict] = {}
    for sec, fields in _SCHEMA.items():
        parsed[sec] = {}
        given = raw.get(sec, {})
        for key, spec in fields.items():
            if key in given:
                parsed[sec][key] = _convert(given[key], spec, f"{origin}: [{sec}] {key}")
            elif spec.required:
                defaults = ", ".join(k for k, s in fields.items() if not s.required)
                raise ConfigError(
                    f"{origin}: missing required key {key!r} in [{sec}] "
                    f"(defaulted keys in this section: {defaults})"
                )
            else:
                parsed[sec][key] = spec.default
    return parsed


def _convert(value: str, spec: _Field, where: str):
    try:
        if spec.kind == "float":
            out = float(value)
        elif spec.kind == "int":
            out = int(value)
        elif spec.kind == "floats":
            out = tuple(float(v) for v in value.replace(",", " ").split())
        else:
            out = value
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {value!r} as {spec.kind}") from None
    if spec.choices and out not in spec.choices:
        raise ConfigError(f"{where}: {out!r} not one of {spec.choices}")
    return out


def scenario_from_config(cfg: dict, **overrides) -> Scenario:
    """Build a Scenario from parsed config, with keyword overrides applied
    to the sweep/trigger settings."""
    cell = CellModel(**cfg["cell"])
    mobility = MobilityProfile(**cfg["mobility"])
    budget = LatencyBudget(**cfg["latency"])
    trig = dict(cfg["trigger"])
    sweep = dict(cfg["sweep"])
    for key, value in overrides.items():
        if value is None:
            continue
        if key in trig:
            trig[key] = value
        elif key in sweep:
            sweep[key] = value
        else:
            raise KeyError(f"unknown override {key!r}")
    trigger = TriggerConfig(**trig)
    return Scenario(
        cell=cell,
        mobility=mobility,
        budget=budget,
        trigger=trigger,
        sweep_values=sweep["values"],
        trials_per_point=sweep["trials_per_point"],
        seed=sweep["seed"],
        sweep_parameter=sweep["parameter"],
        target_pu=sweep["target_pu"],
        target_pf=sweep["target_pf"],
        threshold_policy=sweep["threshold_policy"],
        radius_coupling=sweep["radius_coupling"],
        trigger_rule=sweep["trigger_rule"],
        fixed_thresholds_dbm=sweep["fixed_thresholds_dbm"],
    )


def load_scenario(path, **overrides) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        cfg = parse_config_text(fh.read(), origin=str(path))
    return scenario_from_config(cfg, **overrides)


def load_gra_options(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        cfg = parse_config_text(fh.read(), origin=str(path))
    return cfg["gra"]


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return " ".join(f"{v:g}" for v in value)
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def effective_config_text(cfg: dict) -> str:
    """Serialize a parsed config, defaults included, in re-parseable form."""
    lines = []
    for sec, fields in _SCHEMA.items():
        lines.append(f"[{sec}]")
        for key in fields:
            lines.append(f"{key} = {_format_value(cfg[sec][key])}")
        lines.append("")
    return "\n".join(lines)
