"""Run configuration: a small YAML document with flat keys and optional dotted sections.

Keys may be written flat (``output.dir: out``) or nested
(``output: {dir: out}``); both forms parse to the same :class:`RunConfig`.

Example
-------
>>> cfg = parse_config("problem: transport-sin\\nscheme: hybrid\\nn_cells: 200\\nt_end: 8\\n")
>>> cfg.alpha, cfg.cfl
(0.75, 0.2)
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import yaml

from .detector import DEFAULT_ALPHA
from .errors import ConfigurationError
from .integrator import SchemeKind

TRANSPORT_PROBLEMS = ("transport-sin", "transport-step", "transport-oscillatory")
LS_PROBLEMS = ("ls-homogeneous", "ls-nonhomogeneous")
KNOWN_PROBLEMS = TRANSPORT_PROBLEMS + ("rotation-zalesak",) + LS_PROBLEMS

DEFAULT_CFL = 0.2


@dataclass(frozen=True)
class RunConfig:
    problem: str
    scheme: str = "hybrid"
    n_cells: Optional[int] = None
    n_x: Optional[int] = None
    n_xi: Optional[int] = None
    t_end: Optional[float] = None
    cfl: float = DEFAULT_CFL
    dt: Optional[float] = None
    alpha: float = DEFAULT_ALPHA
    velocity: float = 1.0
    rho: float = 41.0
    initial: str = "irreg"
    xi_max: float = 100.0
    x_max: float = 60.0
    snapshot_times: tuple = ()
    run_id: Optional[str] = None
    seed: int = 0
    output_dir: Optional[str] = None
    output_plot: bool = False

    @property
    def label(self) -> str:
        if self.run_id:
            return self.run_id
        if self.problem == "ls-homogeneous":
            n = self.n_xi
        elif self.problem == "ls-nonhomogeneous":
            n = f"{self.n_x}x{self.n_xi}"
        else:
            n = self.n_cells
        return f"{self.problem}_{SchemeKind.parse(self.scheme).value}_{n}"

    def replace(self, **changes) -> "RunConfig":
        return _validate(dataclasses.replace(self, **changes))


# dotted key in the document -> RunConfig field
_KEYS = {
    "problem": "problem",
    "scheme": "scheme",
    "n_cells": "n_cells",
    "n_x": "n_x",
    "n_xi": "n_xi",
    "t_end": "t_end",
    "cfl": "cfl",
    "dt": "dt",
    "alpha": "alpha",
    "velocity": "velocity",
    "rho": "rho",
    "initial": "initial",
    "xi_max": "xi_max",
    "x_max": "x_max",
    "snapshot_times": "snapshot_times",
    "run_id": "run_id",
    "seed": "seed",
    "output.dir": "output_dir",
    "output.plot": "output_plot",
}
_FIELD_TO_KEY = {v: k for k, v in _KEYS.items()}

_DEFAULT_T_END = {
    "transport-sin": 8.0,
    "transport-step": 8.0,
    "transport-oscillatory": 8.0,
    "rotation-zalesak": 2.0 * math.pi,
    "ls-homogeneous": 2000.0,
    "ls-nonhomogeneous": 350.0,
}
_DEFAULT_LS_DT = {"ls-homogeneous": 0.125, "ls-nonhomogeneous": 0.1}


def _flatten(doc, prefix=""):
    out = {}
    for key, value in doc.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _as_int(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigurationError(f"{key}: expected an integer, got {value!r}")
    return int(value)


def _as_float(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{key}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigurationError(f"{key}: must be finite")
    return value


def _coerce(key: str, value):
    if value is None:
        return None
    if key in ("n_cells", "n_x", "n_xi", "seed"):
        return _as_int(key, value)
    if key in ("t_end", "cfl", "dt", "alpha", "velocity", "rho", "xi_max", "x_max"):
        return _as_float(key, value)
    if key == "snapshot_times":
        if not isinstance(value, (list, tuple)):
            raise ConfigurationError(f"{key}: expected a list of times")
        return tuple(_as_float(key, v) for v in value)
    if key == "output.plot":
        if not isinstance(value, bool):
            raise ConfigurationError(f"{key}: expected true/false")
        return value
    return str(value)


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.problem not in KNOWN_PROBLEMS:
        raise ConfigurationError(f"problem: unknown id {cfg.problem!r}; known: {', '.join(KNOWN_PROBLEMS)}")
    try:
        scheme = SchemeKind.parse(cfg.scheme).value
    except ConfigurationError as exc:
        raise ConfigurationError(f"scheme: {exc}") from None
    if not 0.0 < cfg.alpha <= 1.0:
        raise ConfigurationError(f"alpha: alpha out of (0,1]: {cfg.alpha}")
    if not 0.0 < cfg.cfl <= 1.0:
        raise ConfigurationError(f"cfl: must lie in (0, 1], got {cfg.cfl}")
    if cfg.dt is not None and not cfg.dt > 0.0:
        raise ConfigurationError(f"dt: must be positive, got {cfg.dt}")
    changes = {"scheme": scheme}
    if cfg.problem in LS_PROBLEMS:
        if cfg.initial not in ("reg", "irreg"):
            raise ConfigurationError(f"initial: expected 'reg' or 'irreg', got {cfg.initial!r}")
        if cfg.dt is None:
            changes["dt"] = _DEFAULT_LS_DT[cfg.problem]
        if cfg.n_xi is None:
            changes["n_xi"] = cfg.n_cells if cfg.n_cells is not None else 800
        if cfg.problem == "ls-nonhomogeneous" and cfg.n_x is None:
            changes["n_x"] = 100
        if not cfg.rho > 0.0:
            raise ConfigurationError("rho: must be positive")
        if not (cfg.xi_max > 0.0 and cfg.x_max > 0.0):
            raise ConfigurationError("xi_max/x_max: must be positive")
    elif cfg.n_cells is None:
        raise ConfigurationError(f"n_cells: required for problem {cfg.problem!r}")
    for key in ("n_cells", "n_x", "n_xi"):
        value = changes.get(key, getattr(cfg, key))
        if value is not None and value < 5:
            raise ConfigurationError(f"{key}: need at least 5 cells, got {value}")
    t_end = cfg.t_end if cfg.t_end is not None else _DEFAULT_T_END[cfg.problem]
    if t_end < 0.0:
        raise ConfigurationError("t_end: must be non-negative")
    changes["t_end"] = t_end
    if any(t < 0.0 or t > t_end for t in cfg.snapshot_times):
        raise ConfigurationError("snapshot_times: every time must lie in [0, t_end]")
    return dataclasses.replace(cfg, **changes)


def config_from_mapping(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigurationError("config document must be a mapping")
    flat = _flatten(doc)
    unknown = sorted(set(flat) - set(_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown config key(s): {', '.join(unknown)}")
    if "problem" not in flat:
        raise ConfigurationError("problem: required key missing")
    kwargs = {_KEYS[k]: _coerce(k, v) for k, v in flat.items()}
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return _validate(RunConfig(**kwargs))


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML config document; defaults are filled in."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    return config_from_mapping(doc if doc is not None else {})


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None


def render_config(cfg: RunConfig) -> str:
    """YAML text for ``cfg`` with dotted sections nested; ``parse_config`` inverts it."""
    doc: dict = {}
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, tuple):
            value = list(value)
        key = _FIELD_TO_KEY[f.name]
        if "." in key:
            section, sub = key.split(".", 1)
            doc.setdefault(section, {})[sub] = value
        else:
            doc[key] = value
    return yaml.safe_dump(doc, sort_keys=False)


def apply_overrides(cfg: RunConfig, overrides) -> RunConfig:
    """Apply ``key=value`` strings (values parsed as YAML scalars)."""
    doc = yaml.safe_load(render_config(cfg))
    flat = _flatten(doc)
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        if key not in _KEYS:
            raise ConfigurationError(f"unknown config key(s): {key}")
        try:
            flat[key] = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"{key}: cannot parse {raw!r}: {exc}") from None
    return config_from_mapping(flat)
