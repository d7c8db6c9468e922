"""Scenario configuration: JSON schema, defaults and object construction.

A scenario file is a JSON object with ``"schema_version": 1``. Validation
happens in two passes: the JSON schema checks types and ranges, then
:func:`validate` checks cross-field constraints (probe indices inside the
grid, the time step against the stability limits). Every failure is a
:class:`ConfigError` carrying a dotted field path.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from ..wavesolver import (
    BLOWUP_THRESHOLD,
    Grid1D,
    MediumParams,
    MMParams,
    SourceModel,
    SpatialProfile,
    leading_dt_bound,
    map_regime,
)

SCHEMA_VERSION = 1

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_NONNEGATIVE = {"type": "number", "minimum": 0}
_UNIT_OPEN = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}

SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "equation", "source", "dt", "nt"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "equation": {"enum": ["electric", "magnetic", "modal"]},
        "regime": {"enum": ["high", "low"]},
        "medium": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eps0": _POSITIVE,
                "mu": _POSITIVE,
                "chi_alpha": _NONNEGATIVE,
                "alpha": _UNIT_OPEN,
                "chi0": _NONNEGATIVE,
                "chi_beta": _POSITIVE,
                "beta": _UNIT_OPEN,
            },
        },
        "mm": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alpha", "beta", "lambda1", "lambda2"],
            "properties": {
                "alpha": {"type": "number", "exclusiveMinimum": 1, "exclusiveMaximum": 3},
                "beta": {"type": "number", "minimum": 1, "exclusiveMaximum": 3},
                "lambda1": {"type": "number"},
                "lambda2": {"type": "number"},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["nx", "dx"],
            "properties": {
                "nx": {"type": "integer", "minimum": 3, "maximum": 65536},
                "dx": _POSITIVE,
                "boundary": {"enum": ["periodic", "fixed-zero"]},
            },
        },
        "modal": {
            "type": "object",
            "additionalProperties": False,
            "required": ["k"],
            "properties": {"k": _NONNEGATIVE},
        },
        "source": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["gaussian-pulse", "windowed-sinusoid", "impulse"]},
                "amplitude": {"type": "number"},
                "center": _NONNEGATIVE,
                "width": _POSITIVE,
                "frequency": _NONNEGATIVE,
                "profile": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"enum": ["gaussian", "point"]},
                        "center": {"type": "number"},
                        "width": _POSITIVE,
                    },
                },
            },
        },
        "dt": _POSITIVE,
        "nt": {"type": "integer", "minimum": 2, "maximum": 1_000_000},
        "probes": {
            "type": "array",
            "items": {"type": "integer", "minimum": 0},
            "uniqueItems": True,
        },
        "history_window": {"type": ["integer", "null"], "minimum": 1},
        "stability": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_courant": _POSITIVE,
                "blowup_threshold": _POSITIVE,
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string", "minLength": 1}},
        },
        "seed": {"type": "integer", "minimum": 0},
    },
    "allOf": [
        {
            "if": {"properties": {"regime": {"const": "high"}}, "required": ["regime"]},
            "then": {
                "required": ["medium"],
                "properties": {"medium": {"required": ["chi_alpha", "alpha"]}},
            },
        },
        {
            "if": {"properties": {"regime": {"const": "low"}}, "required": ["regime"]},
            "then": {
                "required": ["medium"],
                "properties": {"medium": {"required": ["chi0", "chi_beta", "beta"]}},
            },
        },
        {
            "if": {"properties": {"equation": {"const": "modal"}}},
            "then": {
                "required": ["modal"],
                "anyOf": [{"required": ["mm"]}, {"required": ["regime", "medium"]}],
            },
            "else": {
                "required": ["regime", "medium", "grid"],
                "not": {"required": ["mm"]},
            },
        },
    ],
}

DEFAULTS: dict = {
    "medium": {"eps0": 1.0, "mu": 1.0},
    "grid": {"boundary": "periodic"},
    "source": {
        "amplitude": 1.0,
        "center": 0.0,
        "width": 1.0,
        "frequency": 0.0,
        "profile": {"kind": "gaussian", "center": 0.0, "width": 1.0},
    },
    "probes": [],
    "history_window": None,
    "stability": {"max_courant": 1.0, "blowup_threshold": BLOWUP_THRESHOLD},
    "output": {"dir": "run"},
    "seed": 0,
}


class ConfigError(ValueError):
    """Invalid scenario; ``path`` is the dotted location of the offending field."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"config error at {path or '<root>'}: {message}")
        self.path = path
        self.message = message


def _merge(defaults: dict, given: dict) -> dict:
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _dotted(path) -> str:
    return ".".join(str(p) for p in path)


def _schema_check(raw: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    err = jsonschema.exceptions.best_match(validator.iter_errors(raw))
    if err is None:
        return
    path = list(err.absolute_path)
    if err.validator == "required":
        # name the missing key itself
        path.append(err.message.split("'")[1])
    raise ConfigError(_dotted(path), err.message)


@dataclass(frozen=True)
class Scenario:
    """A validated configuration turned into solver objects."""

    config: dict
    equation: str
    regime: str | None
    medium: MediumParams | None
    mm: MMParams
    grid: Grid1D | None
    source: SourceModel
    dt: float
    nt: int

    @property
    def k(self) -> float:
        return float(self.config["modal"]["k"])

    @property
    def probes(self) -> list[int]:
        return list(self.config["probes"])

    @property
    def courant(self) -> float | None:
        if self.grid is None:
            return None
        return math.sqrt(abs(self.mm.lambda2)) * self.dt / self.grid.dx


def validate(raw: dict) -> dict:
    """Schema and cross-field checks; returns the config with defaults filled in."""
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be a JSON object")
    _schema_check(raw)
    cfg = _merge(DEFAULTS, raw)
    if cfg["equation"] == "modal":
        cfg.pop("grid", None)
        if "mm" in cfg:
            cfg.pop("medium", None)
            cfg.pop("regime", None)
    else:
        nx = cfg["grid"]["nx"]
        for i, probe in enumerate(cfg["probes"]):
            if probe >= nx:
                raise ConfigError(f"probes.{i}", f"probe index {probe} outside grid of {nx}")
    build(cfg)
    return cfg


def load(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from exc
    return validate(raw)


def _medium(cfg: dict) -> MediumParams:
    med = cfg["medium"]
    kwargs = {"eps0": med["eps0"], "mu": med["mu"]}
    if cfg["regime"] == "high":
        kwargs.update(chi_alpha=med["chi_alpha"], alpha=med["alpha"])
    else:
        kwargs.update(chi0=med["chi0"], chi_beta=med["chi_beta"], beta=med["beta"])
    return MediumParams(**kwargs)


def build(cfg: dict) -> Scenario:
    """Solver objects for a defaults-filled config (cross-field checks included)."""
    medium = None
    regime = cfg.get("regime")
    if "mm" in cfg:
        mm_cfg = cfg["mm"]
        try:
            mm = MMParams(mm_cfg["alpha"], mm_cfg["beta"], mm_cfg["lambda1"], mm_cfg["lambda2"])
        except ValueError as exc:
            raise ConfigError("mm", str(exc)) from exc
    else:
        try:
            medium = _medium(cfg)
        except ValueError as exc:
            raise ConfigError("medium", str(exc)) from exc
        mm = map_regime(regime, medium)

    src_cfg = cfg["source"]
    prof = src_cfg["profile"]
    try:
        source = SourceModel(
            kind=src_cfg["kind"],
            amplitude=src_cfg["amplitude"],
            center=src_cfg["center"],
            width=src_cfg["width"],
            frequency=src_cfg["frequency"],
            profile=SpatialProfile(prof["kind"], prof["center"], prof["width"]),
        )
    except ValueError as exc:
        raise ConfigError("source", str(exc)) from exc

    grid = None
    if cfg["equation"] != "modal":
        g = cfg["grid"]
        grid = Grid1D(g["nx"], g["dx"], g["boundary"])
        if prof["kind"] == "point" and not 0 <= round(prof["center"] / grid.dx) < grid.nx:
            raise ConfigError("source.profile.center", "point source lies outside the grid")

    dt = float(cfg["dt"])
    bound = leading_dt_bound(mm)
    if not dt < bound:
        raise ConfigError("dt", f"dt={dt} must be below {bound:.6g} for a positive leading weight")
    scenario = Scenario(
        cfg, cfg["equation"], regime, medium, mm, grid, source, dt, int(cfg["nt"])
    )
    courant = scenario.courant
    limit = cfg["stability"]["max_courant"]
    if courant is not None and mm.lambda2 > 0 and courant > limit:
        raise ConfigError("dt", f"Courant number {courant:.6g} exceeds max_courant={limit}")
    return scenario


def set_field(cfg: dict, dotted: str, value) -> dict:
    """Copy of *cfg* with the dotted field replaced (used by sweeps)."""
    out = copy.deepcopy(cfg)
    keys = dotted.split(".")
    node = out
    for key in keys[:-1]:
        if isinstance(node, list):
            node = node[int(key)]
        else:
            node = node.setdefault(key, {})
    last = keys[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value
    return out
