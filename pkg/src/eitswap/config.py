"""Run configuration files.

A configuration is a TOML document with up to five tables::

    [scenario]
    preset = "fig2"            # or "none": every shape key is then required
    tau1 = 11.5
    t_max = 20.0
    x_max = 1000.0
    y_max = 400.0
    probe = [[0.9, 2.5, 1.0], [1.2, 6.0, 1.0]]   # (amplitude, center, width) terms
    profile = [[1.0, 100.0, 20.0]]
    storing_plateau = 10.0
    storing_edge = 8.0
    storing_width = 1.0
    retrieving_plateau = 10.0
    retrieving_edge = 15.0
    retrieving_width = 1.0
    switch_cutoff = 1e-5

    [solver]
    scheme = "lax-wendroff"    # or "upwind"
    cfl = 0.8
    dt_cap = 0.25
    nx = 512
    ny = 512
    snapshot_times = [4.0, 8.0, 12.0, 15.5, 16.5]
    workers = 1

    [medium]
    units = "dimensionless"    # or "physical" (needs atom and T_seconds)
    q = 1.0
    c = inf
    atom = ""                  # bundled preset name or TOML path
    T_seconds = 0.0

    [output]
    dir = "out"
    binary = false
    verify = false

    [oracle]
    coupling = 10.0
    time_scale = 1.0
    probe_scale = 1.0
    delta = 0.0
    gamma3 = 0.0
    gamma21 = 0.0
    dt = 0.001
    max_rho21_residual = 0.05
    max_rho33 = 0.02

Times are in units of ``T``, lengths in ``x0``. A ``physical`` medium only
adds the conversion factors to the snapshot headers; the simulation itself
always runs in the dimensionless units.
"""

from __future__ import annotations

import copy
import math
import warnings
from dataclasses import dataclass
from typing import Any, Dict, Optional

import tomli
import tomli_w

from .envelopes import (DEFAULT_SWITCH_CUTOFF, TURN_OFF, TURN_ON, CouplingSchedule,
                        Envelope)
from .errors import ConfigError, RegimeError
from .medium import MediumParams, characteristic_length, coupling_constant, load_preset
from .medium import validate_regime
from .numeric.solver import DEFAULT_SNAPSHOTS, SolverSpec
from .scenario import FIG2_TAU1, ScenarioConfig

PRESETS = ("fig2", "none")

_FIG2_SCENARIO = {
    "tau1": FIG2_TAU1,
    "probe": [[0.9, 2.5, 1.0], [1.2, 6.0, 1.0]],
    "profile": [[1.0, 100.0, 20.0]],
    "storing_plateau": 10.0,
    "storing_edge": 8.0,
    "storing_width": 1.0,
    "retrieving_plateau": 10.0,
    "retrieving_edge": 15.0,
    "retrieving_width": 1.0,
}
_SHAPE_KEYS = tuple(_FIG2_SCENARIO)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "scenario": {"preset": "fig2", "t_max": 20.0, "x_max": 1000.0, "y_max": 400.0,
                 "switch_cutoff": DEFAULT_SWITCH_CUTOFF},
    "solver": {"scheme": "lax-wendroff", "cfl": 0.8, "dt_cap": 0.25, "nx": 512, "ny": 512,
               "snapshot_times": list(DEFAULT_SNAPSHOTS), "workers": 1},
    "medium": {"units": "dimensionless", "q": 1.0, "c": math.inf, "atom": "",
               "T_seconds": 0.0},
    "output": {"dir": "out", "binary": False, "verify": False},
    "oracle": {"coupling": 10.0, "time_scale": 1.0, "probe_scale": 1.0, "delta": 0.0,
               "gamma3": 0.0, "gamma21": 0.0, "dt": 1e-3,
               "max_rho21_residual": 0.05, "max_rho33": 0.02},
}
KNOWN_KEYS = {sec: set(keys) for sec, keys in DEFAULTS.items()}
KNOWN_KEYS["scenario"] |= set(_SHAPE_KEYS)

_TYPES = {bool: (bool,), int: (int,), float: (int, float), str: (str,), list: (list,)}


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "out"
    binary: bool = False
    verify: bool = False


@dataclass(frozen=True)
class OracleSpec:
    coupling: float = 10.0
    time_scale: float = 1.0
    probe_scale: float = 1.0
    delta: float = 0.0
    gamma3: float = 0.0
    gamma21: float = 0.0
    dt: float = 1e-3
    max_rho21_residual: float = 0.05
    max_rho33: float = 0.02


@dataclass(frozen=True)
class UnitSpec:
    """Physical scale of the dimensionless units (``None`` when not requested)."""

    t_seconds: Optional[float] = None
    x0_cm: Optional[float] = None


@dataclass
class RunConfig:
    scenario: ScenarioConfig
    solver: SolverSpec
    output: OutputSpec
    oracle: OracleSpec
    units: UnitSpec
    resolved: Dict[str, Dict[str, Any]]
    diagnostics: list


def _check_type(section: str, key: str, value, default):
    if default is None:
        return value
    kind = type(default)
    if kind is float and isinstance(value, bool):
        raise ConfigError(f"{section}.{key} must be a number")
    if not isinstance(value, _TYPES[kind]):
        raise ConfigError(f"{section}.{key} must be of type {kind.__name__}, "
                          f"got {type(value).__name__}")
    return float(value) if kind is float else value


def _triples(name: str, value) -> list:
    try:
        out = [[float(v) for v in term] for term in value]
    except (TypeError, ValueError):
        raise ConfigError(f"scenario.{name} must be a list of [amplitude, center, width]")
    if any(len(t) != 3 for t in out):
        raise ConfigError(f"scenario.{name} terms need exactly three numbers")
    return out


def _resolve(doc: Dict[str, Any], strict: bool) -> Dict[str, Dict[str, Any]]:
    for section in doc:
        if section not in DEFAULTS:
            msg = f"unknown section [{section}]"
            if strict:
                raise ConfigError(msg)
            warnings.warn(msg)
        elif not isinstance(doc[section], dict):
            raise ConfigError(f"{section} must be a table")
    resolved = copy.deepcopy(DEFAULTS)
    given = doc.get("scenario", {})
    preset = given.get("preset", "fig2")
    if preset not in PRESETS:
        raise ConfigError(f"unknown scenario preset {preset!r}; expected one of {PRESETS}")
    if preset == "fig2":
        resolved["scenario"].update(copy.deepcopy(_FIG2_SCENARIO))
    else:
        missing = [k for k in _SHAPE_KEYS if k not in given]
        if missing:
            raise ConfigError("missing required key(s) for preset 'none': "
                              + ", ".join(f"scenario.{k}" for k in missing))
    for section, values in doc.items():
        if section not in DEFAULTS:
            continue
        for key, value in values.items():
            if key not in KNOWN_KEYS[section]:
                msg = f"unknown key {section}.{key}"
                if strict:
                    raise ConfigError(msg)
                warnings.warn(msg)
                continue
            default = resolved[section].get(key, DEFAULTS[section].get(key))
            if key in ("probe", "profile"):
                value = _triples(key, value)
            elif key == "snapshot_times":
                if not isinstance(value, list):
                    raise ConfigError("solver.snapshot_times must be a list")
                value = [float(v) for v in value]
            else:
                value = _check_type(section, key, value, default)
            resolved[section][key] = value
    return resolved


def _build_scenario(sec: Dict[str, Any], medium: MediumParams) -> ScenarioConfig:
    tau1 = sec["tau1"]
    storing = CouplingSchedule(plateau=sec["storing_plateau"], edge_center=sec["storing_edge"],
                               edge_width=sec["storing_width"], sense=TURN_OFF,
                               cutoff=sec["switch_cutoff"])
    retrieving = CouplingSchedule(plateau=sec["retrieving_plateau"],
                                  edge_center=sec["retrieving_edge"],
                                  edge_width=sec["retrieving_width"], sense=TURN_ON,
                                  activation=tau1, cutoff=sec["switch_cutoff"])
    return ScenarioConfig(probe=Envelope.gaussian_sum(sec["probe"]),
                          profile=Envelope.gaussian_sum(sec["profile"]),
                          storing=storing, retrieving=retrieving, tau1=tau1, medium=medium,
                          x_max=sec["x_max"], y_max=sec["y_max"], t_max=sec["t_max"])


def _units(sec: Dict[str, Any]) -> UnitSpec:
    units, atom, t_s = sec["units"], sec["atom"], sec["T_seconds"]
    if units == "dimensionless":
        if atom or t_s:
            raise ConfigError("inconsistent units: medium.atom/T_seconds need units = 'physical'")
        return UnitSpec()
    if units != "physical":
        raise ConfigError(f"inconsistent units: medium.units={units!r}; "
                          "expected 'dimensionless' or 'physical'")
    if sec["q"] != 1.0:
        raise ConfigError("inconsistent units: a physical medium fixes q = 1 in units of x0")
    if not atom or not t_s > 0:
        raise ConfigError("inconsistent units: units = 'physical' needs medium.atom "
                          "and a positive medium.T_seconds")
    try:
        preset = load_preset(atom)
    except (OSError, ValueError, ModuleNotFoundError) as exc:
        raise ConfigError(f"cannot load atom preset {atom!r}: {exc}") from exc
    if preset.units != "gaussian":
        raise ConfigError("inconsistent units: headers report lengths in cm, "
                          "the atom preset must use Gaussian units")
    return UnitSpec(t_seconds=t_s, x0_cm=characteristic_length(coupling_constant(preset), t_s))


def parse_config(text: str, strict: bool = True, check_regime: bool = True) -> RunConfig:
    """Parse, resolve defaults and validate a configuration document.

    Raises ``ConfigError`` for syntax errors (with the line number), unknown
    keys in strict mode, missing keys and inconsistent units; raises
    ``RegimeError`` when ``check_regime`` is set and the scenario violates the
    weak-probe, adiabatic or switching conditions.
    """
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"syntax error: {exc}") from exc
    resolved = _resolve(doc, strict)
    med = resolved["medium"]
    units = _units(med)
    try:
        medium = MediumParams(q_p=med["q"], c=med["c"])
        scenario = _build_scenario(resolved["scenario"], medium)
        sol = resolved["solver"]
        solver = SolverSpec(scheme=sol["scheme"], cfl=sol["cfl"], dt_cap=sol["dt_cap"],
                            nx=sol["nx"], ny=sol["ny"],
                            snapshot_times=tuple(sol["snapshot_times"]),
                            workers=sol["workers"])
        output = OutputSpec(**resolved["output"])
        oracle = OracleSpec(**resolved["oracle"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if any(t < 0 or t > scenario.t_max for t in solver.snapshot_times):
        raise ConfigError(f"snapshot times must lie in [0, t_max={scenario.t_max:g}]")
    if len(set(solver.snapshot_times)) != len(solver.snapshot_times):
        raise ConfigError("duplicate snapshot times")
    diagnostics = validate_regime(scenario)
    if diagnostics and check_regime:
        raise RegimeError(diagnostics)
    return RunConfig(scenario, solver, output, oracle, units, resolved, diagnostics)


def load_config(path, strict: bool = True, check_regime: bool = True) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, strict=strict, check_regime=check_regime)


def dump_config(cfg) -> str:
    """TOML text of a resolved configuration (``RunConfig`` or its ``resolved`` dict)."""
    resolved = cfg.resolved if isinstance(cfg, RunConfig) else cfg
    return tomli_w.dumps(resolved)


def apply_overrides(cfg: RunConfig, strict: bool = True, check_regime: bool = True,
                    **overrides) -> RunConfig:
    """Re-resolve ``cfg`` with ``section.key`` overrides (``None`` values are skipped)."""
    doc = copy.deepcopy(cfg.resolved)
    for dotted, value in overrides.items():
        if value is None:
            continue
        section, key = dotted.split(".", 1)
        doc[section][key] = value
    return parse_config(tomli_w.dumps(doc), strict=strict, check_regime=check_regime)
