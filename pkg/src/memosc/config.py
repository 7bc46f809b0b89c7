"""YAML configuration files with SPICE-style engineering suffixes.

Example::

    memristor: {r_on: 100, r_off: 38k, d: 10n, mu_v: 1e-14}
    circuit: {r_a: 8k, v_p: 0.8, v_n: 0.3, v_bias: 0.5, v_ol: 0, v_oh: 1}
    sim: {dt: 100u, t_end: 2}
    triggers:
      - {start: 0.1, width: 1m}
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields

import yaml

from .circuit import CircuitParams
from .design import equilibrium_resistances
from .memristor import MemristorParams

SUFFIXES = {"p": 1e-12, "n": 1e-9, "u": 1e-6, "m": 1e-3, "k": 1e3, "meg": 1e6, "M": 1e6, "G": 1e9}
_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(meg|[pnumkMG])?\s*$")

SIM_DEFAULTS = {"dt": 1e-4, "crossing_tol": 1e-9, "record_stride": 1}


class ConfigError(ValueError):
    """Bad configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def parse_quantity(value, path: str = "") -> float:
    """Parse ``8k``, ``10n``, ``1e-14`` or a plain number into a float."""
    if isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _NUMBER.match(value)
        if m:
            return float(m.group(1)) * SUFFIXES.get(m.group(2), 1.0)
    raise ConfigError(path, f"expected a number, got {value!r}")


@dataclass
class ConfigDocument:
    memristor: MemristorParams
    circuit: CircuitParams
    sim: dict
    triggers: list[tuple[float, float]]


def _section(doc: dict, name: str, required: bool = True) -> dict:
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ConfigError(name, "missing section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(name, "expected a mapping")
    return sec


def _numbers(sec: dict, prefix: str, allowed: set[str], required: set[str]) -> dict:
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(f"{prefix}.{sorted(unknown)[0]}", "unknown field")
    missing = required - set(sec)
    if missing:
        raise ConfigError(f"{prefix}.{sorted(missing)[0]}", "missing field")
    return {k: parse_quantity(v, f"{prefix}.{k}") for k, v in sec.items()}


def parse_config(doc) -> ConfigDocument:
    if not isinstance(doc, dict):
        raise ConfigError("", "config must be a mapping")
    unknown = set(doc) - {"memristor", "circuit", "sim", "triggers"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown section")

    cfields = {f.name for f in fields(CircuitParams)}
    cvals = _numbers(_section(doc, "circuit"), "circuit", cfields,
                     {"r_a", "v_p", "v_n", "v_bias"})
    try:
        circuit = CircuitParams(**cvals)
    except ValueError as exc:
        raise ConfigError("circuit", str(exc)) from None

    mfields = {f.name for f in fields(MemristorParams)}
    mvals = _numbers(_section(doc, "memristor"), "memristor", mfields, mfields - {"r_init"})
    if "r_init" not in mvals and {"r_on", "r_off"} <= set(mvals):
        r_mn = equilibrium_resistances(circuit)[1]
        mvals["r_init"] = min(max(r_mn, mvals["r_on"]), mvals["r_off"])
    try:
        memristor = MemristorParams(**mvals)
    except ValueError as exc:
        raise ConfigError("memristor", str(exc)) from None

    sim = dict(SIM_DEFAULTS)
    sim.update(_numbers(_section(doc, "sim", required=False), "sim",
                        set(SIM_DEFAULTS) | {"t_end"}, set()))
    if float(sim["record_stride"]).is_integer():
        sim["record_stride"] = int(sim["record_stride"])
    else:
        raise ConfigError("sim.record_stride", "must be an integer")

    triggers = []
    raw = doc.get("triggers") or []
    if not isinstance(raw, list):
        raise ConfigError("triggers", "expected a list")
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ConfigError(f"triggers[{i}]", "expected a mapping with start and width")
        vals = _numbers(item, f"triggers[{i}]", {"start", "width"}, {"start", "width"})
        triggers.append((vals["start"], vals["width"]))
    return ConfigDocument(memristor, circuit, sim, triggers)


def load_config(path) -> ConfigDocument:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("", f"invalid YAML: {str(exc).splitlines()[0]}") from None
    return parse_config(doc)


def paper_defaults() -> dict:
    """The published simulation set as a config mapping."""
    return {
        "memristor": {"r_on": 100, "r_off": "38k", "d": "10n", "mu_v": "1e-14"},
        "circuit": {"r_a": "8k", "r_trans_on": 0, "v_p": 0.8, "v_n": 0.3,
                    "v_bias": 0.5, "v_ol": 0, "v_oh": 1},
        "sim": {"dt": "100u", "t_end": 2, "crossing_tol": "1n", "record_stride": 1},
        "triggers": [{"start": 0.1, "width": "1m"}],
    }


def paper_defaults_yaml() -> str:
    return ("# memristor r_init defaults to R_mn of the circuit (steady-cycle start),\n"
            "# clamped to [r_on, r_off]\n"
            + yaml.safe_dump(paper_defaults(), sort_keys=False))
