"""JSON configuration files.

A config fixes the gas constants, the geometry (a wall, a wing or the
Cauchy problem), the initial data and the discretization.  Files carry a
``version`` field and unknown keys are rejected.  The smallness budget
``TV(U0) + |b'(0)| + TV(b')`` is checked when a file is loaded.

Example::

    {"version": 1, "name": "demo",
     "params": {"gamma": 1.4, "a_inf": 0.5, "tau": 0.1},
     "geometry": {"kind": "piecewise_linear", "breakpoints": [], "slopes": [-0.05]},
     "initial_data": {"kind": "constant", "state": [1.0, 0.0]},
     "h": 0.05, "nu": 12, "x_end": 1.0, "seed": 0, "query_xs": [0.5, 1.0]}
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import jsonschema

from .engine import InitialData, RunConfig
from .errors import (BudgetExceededError, ConfigError, InvalidBoundaryError,
                     InvalidDataError)
from .gas_core import SimilarityParams
from .geometry import WallSpec, WingGeometry
from .wing import TAIL_C, WingConfig

SCHEMA_VERSION = 1

_NUM = {"type": "number"}
_NUMS = {"type": "array", "items": _NUM}
_STATE = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}

_WALL = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["piecewise_linear", "samples"]},
        "breakpoints": _NUMS, "slopes": _NUMS, "x": _NUMS, "y": _NUMS,
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["version", "params", "geometry", "h", "nu", "x_end"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "params": {
            "type": "object",
            "properties": {
                "gamma": _NUM, "a_inf": _NUM, "tau": _NUM,
                "neighborhood_radius": _NUM, "curve_radius": _NUM,
            },
            "additionalProperties": False,
        },
        "regime": {"enum": ["scaled", "small_disturbance"]},
        "geometry": {
            "oneOf": [
                {"const": "cauchy"},
                _WALL,
                {
                    "type": "object",
                    "required": ["kind", "chord", "thickness"],
                    "properties": {"kind": {"const": "lens"}, "chord": _NUM,
                                   "thickness": _NUM},
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "required": ["kind", "chord", "upper", "lower"],
                    "properties": {"kind": {"const": "wing"}, "chord": _NUM,
                                   "upper": _WALL, "lower": _WALL},
                    "additionalProperties": False,
                },
            ]
        },
        "initial_data": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["constant", "jumps", "bump"]},
                "state": _STATE,
                "breakpoints": _NUMS,
                "states": {"type": "array", "items": _STATE},
                "center": _NUM, "half_width": _NUM, "amplitude": _STATE,
            },
            "additionalProperties": False,
        },
        "h": {"type": "number", "exclusiveMinimum": 0},
        "nu": {"type": "integer", "minimum": 4},
        "x_end": _NUM,
        "seed": {"type": "integer"},
        "query_xs": _NUMS,
        "taus": _NUMS,
        "budget": {"type": "number", "exclusiveMinimum": 0},
        "max_fronts": {"type": "integer", "minimum": 1},
        "tail_c": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 2},
        "synthetic_errors": {"type": "array", "items": _NUMS},
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class Config:
    """Validated contents of a config file."""

    name: str
    params: SimilarityParams
    geometry: object  # WallSpec, WingGeometry or None (Cauchy)
    initial_data: InitialData
    h: float
    nu: int
    x_end: float
    seed: int = 0
    query_xs: tuple = ()
    taus: tuple = ()
    budget: float = 0.5
    max_fronts: int = 20000
    tail_c: float = TAIL_C
    samples: int = 24
    synthetic_errors: tuple | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_wing(self) -> bool:
        return isinstance(self.geometry, WingGeometry)

    @property
    def wall(self) -> WallSpec | None:
        return self.geometry if isinstance(self.geometry, WallSpec) else None

    def xs(self) -> tuple:
        return self.query_xs if self.query_xs else (self.x_end,)

    def with_seed(self, seed: int | None) -> "Config":
        return self if seed is None else replace(self, seed=int(seed))

    def run_config(self, tau: float | None = None, lambda_hat=None) -> RunConfig:
        if self.is_wing:
            raise ConfigError("wing configs are run through the wing command")
        params = self.params if tau is None else self.params.with_tau(tau)
        return RunConfig(params, h=self.h, nu=self.nu, x_end=self.x_end,
                         wall=self.wall, initial_data=self.initial_data,
                         seed=self.seed, lambda_hat=lambda_hat,
                         budget=self.budget, max_fronts=self.max_fronts)

    def wing_config(self) -> WingConfig:
        if not self.is_wing:
            raise ConfigError("config has no wing geometry")
        taus = self.taus if self.taus else (self.params.tau,)
        return WingConfig(self.params, self.geometry, h=self.h, nu=self.nu,
                          seed=self.seed, taus=tuple(taus), tail_c=self.tail_c,
                          samples=self.samples, budget=self.budget,
                          max_fronts=self.max_fronts)


def _wall_variation(spec: WallSpec) -> float:
    # |b'(0)| + TV(b') in terms of slopes
    _, slopes = spec._slope_pieces()
    return abs(slopes[0]) + sum(abs(b - a) for a, b in zip(slopes, slopes[1:]))


def smallness(cfg: Config) -> float:
    """``TV(U0) + |b'(0)| + TV(b')`` summed over all walls."""
    tv = cfg.initial_data.total_variation
    if isinstance(cfg.geometry, WallSpec):
        tv += _wall_variation(cfg.geometry)
    elif isinstance(cfg.geometry, WingGeometry):
        tv += _wall_variation(cfg.geometry.upper) + _wall_variation(cfg.geometry.lower)
    return tv


def _geometry(g, h: float):
    if g == "cauchy":
        return None
    kind = g["kind"]
    if kind == "lens":
        return WingGeometry.lens(float(g["chord"]), float(g["thickness"]), h)
    if kind == "wing":
        return WingGeometry(float(g["chord"]), WallSpec.from_dict(g["upper"]),
                            WallSpec.from_dict(g["lower"]))
    return WallSpec.from_dict(g)


def from_dict(d: dict) -> Config:
    """Validate a parsed config.

    Raises
    ------
    ConfigError
        On schema violations or inconsistent values.
    BudgetExceededError
        If the smallness budget is exceeded.
    """
    try:
        jsonschema.validate(d, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError("%s: %s" % (path, exc.message)) from None
    try:
        params = SimilarityParams(**d["params"])
    except (TypeError, ValueError) as exc:
        raise ConfigError("params: %s" % exc) from None
    if "regime" in d and d["regime"] != params.regime:
        raise ConfigError("regime %r contradicts tau = %g" % (d["regime"], params.tau))
    h = float(d["h"])
    try:
        geometry = _geometry(d["geometry"], h)
        data = InitialData.from_dict(d.get("initial_data", {"kind": "constant"}))
    except (InvalidBoundaryError, InvalidDataError) as exc:
        raise ConfigError(str(exc)) from None
    taus = tuple(float(t) for t in d.get("taus", ()))
    for t in taus:
        if not 0.0 < t < 0.5 * params.a_inf:
            raise ConfigError("taus must lie in (0, a_inf / 2)")
    query_xs = tuple(float(x) for x in d.get("query_xs", ()))
    x_end = float(d["x_end"])
    if not x_end > 0.0 or any(not 0.0 < x <= x_end for x in query_xs):
        raise ConfigError("query_xs must lie in (0, x_end]")
    synth = d.get("synthetic_errors")
    if synth is not None:
        synth = tuple(tuple(float(e) for e in row) for row in synth)
        if len(synth) != max(1, len(query_xs)) or any(len(r) != len(taus) for r in synth):
            raise ConfigError("synthetic_errors needs one row per query x and one entry per tau")
    cfg = Config(
        name=d.get("name", "run"), params=params, geometry=geometry,
        initial_data=data, h=h, nu=int(d["nu"]), x_end=x_end,
        seed=int(d.get("seed", 0)), query_xs=query_xs, taus=taus,
        budget=float(d.get("budget", 0.5)),
        max_fronts=int(d.get("max_fronts", 20000)),
        tail_c=float(d.get("tail_c", TAIL_C)),
        samples=int(d.get("samples", 24)), synthetic_errors=synth, raw=d)
    s = smallness(cfg)
    if not math.isfinite(s) or s > cfg.budget:
        raise BudgetExceededError(
            "TV(U0) + |b'(0)| + TV(b') = %.4g exceeds the budget %.4g" % (s, cfg.budget))
    return cfg


def load(path) -> Config:
    """Read and validate a JSON config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("cannot read %s: %s" % (path, exc.strerror)) from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("%s is not valid JSON: %s" % (path, exc)) from None
    if not isinstance(d, dict):
        raise ConfigError("top level of a config must be an object")
    return from_dict(d)
