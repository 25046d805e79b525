"""Scenario configuration: a JSON tree merged over per-scenario defaults.

Top-level sections::

    scenario   one of SCENARIOS
    c          speed of light (m/s, or 1 for dimensionless runs)
    geometry   {"R", "L", "a"} in metres
    regions    {"d": middle thickness or null, "layers": [{"eps", "mu"}, ...]}
    drive      {"branch", "kappa", "chi", "periods"}
    numerics   {"method", "rel_tol", "abs_tol", "max_steps", "digits", "steps_per_period"}
    params     scenario specific scalars (omega, k_perp, n, p, m, count, ...)
    sweep      [{"name": dotted path, "start", "stop", "count", "scale": "linear"|"log"}]
    output     {"path", "format": "csv"|"json"}

Complex permittivities are written as ``[re, im]``.
"""

import copy
import hashlib
import json
import math
from dataclasses import dataclass

from ..errors import ConfigError
from ..media import C0

SCENARIOS = ("DispersionSweep", "MultilayerSweep", "CavityModes", "Creation", "Compare")

_NUMERICS = {
    "method": "dopri5",
    "rel_tol": 1e-10,
    "abs_tol": 1e-14,
    "max_steps": 5_000_000,
    "digits": 120,
    "steps_per_period": 64,
}

_DEFAULTS = {
    "DispersionSweep": {
        "c": C0,
        "regions": {"d": None, "layers": [{"eps": -2.0, "mu": 1.0}, {"eps": 1.0, "mu": 1.0}]},
        "params": {"omega": 1e15, "polarization": "TMelectric"},
        "sweep": [
            {"name": "params.omega", "start": 1e14, "stop": 1.5e15, "count": 100, "scale": "linear"}
        ],
    },
    "MultilayerSweep": {
        "c": 1.0,
        "regions": {"d": 1.0, "layers": [{"eps": 2.0}, {"eps": -5.0}, {"eps": 2.0}]},
        "params": {"k_perp": 1.0, "polarization": "TMelectric"},
        "sweep": [{"name": "regions.d", "start": 0.01, "stop": 20.0, "count": 30, "scale": "log"}],
    },
    "CavityModes": {
        "c": C0,
        "geometry": {"R": 0.025, "L": 0.1, "a": 0.05},
        "regions": {"d": None, "layers": [{"eps": 4.0}, {"eps": 1.0}]},
        "params": {"n": 0, "p": 1, "count": 5, "field": None},
        "sweep": [],
    },
    "Creation": {
        "c": 1.0,
        "geometry": {"R": 1.0, "L": 1.0, "a": 0.01},
        "regions": {"d": None, "layers": [{"eps": -4.0}, {"eps": 2.0}]},
        "drive": {"branch": "SPPelectric", "kappa": 0.01, "chi": -0.5, "periods": 2000},
        "params": {"k_perp": 1.0, "n": 0, "p": 1, "m": 1},
        "sweep": [{"name": "drive.kappa", "start": 0.0, "stop": 0.04, "count": 5, "scale": "linear"}],
    },
    "Compare": {
        "c": C0,
        "geometry": {"R": 0.025, "L": 0.1, "a": 1e-5},
        "regions": {"d": None, "layers": [{"eps": -5.0}, {"eps": 1.0}]},
        "drive": {"kappa": 0.05, "chi": -0.5, "photon_chi": 0.5, "periods": 200},
        "params": {"k_perp": 1.0, "n": 0, "p": 1, "m": 1},
        "sweep": [{"name": "params.k_perp", "start": 0.1, "stop": 1e6, "count": 8, "scale": "log"}],
    },
}


def default_config(scenario):
    """Complete default tree for ``scenario``."""
    if scenario not in _DEFAULTS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")
    tree = {
        "scenario": scenario,
        "c": C0,
        "geometry": {"R": 0.025, "L": 0.1, "a": 1e-5},
        "regions": {"d": None, "layers": []},
        "drive": {},
        "numerics": dict(_NUMERICS),
        "params": {},
        "sweep": [],
        "output": {"path": None, "format": "csv"},
    }
    return _merge(tree, copy.deepcopy(_DEFAULTS[scenario]))


def _merge(base, over):
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(base.get(key), dict):
            _merge(base[key], val)
        else:
            base[key] = val
    return base


def get_path(tree, path):
    node = tree
    for part in path.split("."):
        if isinstance(node, list):
            if not part.isdigit() or int(part) >= len(node):
                raise ConfigError(path, "no such parameter")
            node = node[int(part)]
        elif isinstance(node, dict) and part in node:
            node = node[part]
        else:
            raise ConfigError(path, "no such parameter")
    return node


def set_path(tree, path, value):
    parts = path.split(".")
    get_path(tree, path)  # must already exist
    node = tree
    for part in parts[:-1]:
        node = node[int(part)] if isinstance(node, list) else node[part]
    last = parts[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def values(self):
        if self.count == 1:
            return [float(self.start)]
        n = self.count - 1
        if self.scale == "log":
            lo, hi = math.log10(self.start), math.log10(self.stop)
            vals = [10.0 ** (lo + (hi - lo) * i / n) for i in range(self.count)]
        else:
            vals = [self.start + (self.stop - self.start) * i / n for i in range(self.count)]
        # pin the endpoints so that they echo exactly as configured
        vals[0], vals[-1] = float(self.start), float(self.stop)
        return vals


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated configuration; ``tree`` is the fully resolved JSON tree."""

    scenario: str
    tree: dict
    axes: tuple

    @property
    def output(self):
        return self.tree["output"]

    def config_hash(self):
        """SHA-256 of the resolved tree without the ``output`` section."""
        body = {k: v for k, v in self.tree.items() if k != "output"}
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _number(tree, path, positive=False, allow_none=False):
    val = get_path(tree, path)
    if val is None and allow_none:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ConfigError(path, f"expected a finite number, got {val!r}")
    if positive and not val > 0:
        raise ConfigError(path, f"must be > 0, got {val!r}")
    return val


def _validate(tree):
    scenario = tree.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")
    _number(tree, "c", positive=True)
    for key in ("R", "L", "a"):
        _number(tree, f"geometry.{key}", positive=True)
    if tree["geometry"]["a"] > tree["geometry"]["L"]:
        raise ConfigError("geometry.a", "slab thickness exceeds cavity length L")
    layers = get_path(tree, "regions.layers")
    if not isinstance(layers, list):
        raise ConfigError("regions.layers", "expected a list of {eps, mu} objects")
    for i, layer in enumerate(layers):
        if not isinstance(layer, dict) or "eps" not in layer:
            raise ConfigError(f"regions.layers.{i}", "each layer needs an 'eps' entry")
        for key in ("eps", "mu"):
            val = layer.get(key, 1.0)
            ok = isinstance(val, (int, float)) and not isinstance(val, bool)
            ok = ok or (isinstance(val, list) and len(val) == 2)
            if not ok:
                raise ConfigError(f"regions.layers.{i}.{key}", f"expected number or [re, im], got {val!r}")
    need = {"DispersionSweep": 2, "MultilayerSweep": 3, "CavityModes": 2, "Creation": 2, "Compare": 2}
    if len(layers) != need[scenario]:
        raise ConfigError("regions.layers", f"{scenario} needs {need[scenario]} layers")
    if scenario == "MultilayerSweep":
        _number(tree, "regions.d", positive=True)
    num = tree["numerics"]
    if num.get("method") not in ("dopri5", "symplectic"):
        raise ConfigError("numerics.method", "must be 'dopri5' or 'symplectic'")
    for key in ("rel_tol", "abs_tol", "max_steps", "digits", "steps_per_period"):
        _number(tree, f"numerics.{key}", positive=True)
    fmt = tree["output"].get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", "must be 'csv' or 'json'")
    if "kappa" in tree["drive"]:
        kappa = _number(tree, "drive.kappa")
        if not 0 <= kappa < 1:
            raise ConfigError("drive.kappa", "modulation depth must satisfy 0 <= kappa < 1")

    axes = []
    sweep = tree.get("sweep") or []
    if not isinstance(sweep, list):
        raise ConfigError("sweep", "expected a list of axis objects")
    for i, ax in enumerate(sweep):
        where = f"sweep.{i}"
        if not isinstance(ax, dict) or "name" not in ax:
            raise ConfigError(where, "axis needs a 'name'")
        get_path(tree, ax["name"])
        count = ax.get("count", 1)
        if not isinstance(count, int) or count < 1:
            raise ConfigError(f"{where}.count", "must be an integer >= 1")
        scale = ax.get("scale", "linear")
        if scale not in ("linear", "log"):
            raise ConfigError(f"{where}.scale", "must be 'linear' or 'log'")
        start = _number(tree, f"{where}.start")
        stop = _number(tree, f"{where}.stop") if "stop" in ax else start
        if scale == "log" and not (start > 0 and stop > 0):
            raise ConfigError(where, "log axes need positive start and stop")
        axes.append(SweepAxis(ax["name"], start, stop, count, scale))
    return ScenarioConfig(scenario, tree, tuple(axes))


def parse_override(text):
    """``key=value`` with ``value`` read as JSON when possible."""
    if "=" not in text:
        raise ConfigError(text, "override must look like key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def build_config(data, scenario=None, overrides=()):
    """Merge ``data`` over the defaults, apply ``overrides`` and validate."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "configuration must be a JSON object")
    named = data.get("scenario")
    if named is not None and named not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {named!r}; valid: {', '.join(SCENARIOS)}")
    if scenario and named and named != scenario:
        raise ConfigError("scenario", f"config declares {named!r} but {scenario!r} was requested")
    scenario = scenario or named
    tree = default_config(scenario)
    unknown = set(data) - set(tree)
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level key")
    _merge(tree, copy.deepcopy(data))
    tree["scenario"] = scenario
    for key, value in overrides:
        set_path(tree, key, value)
    return _validate(tree)


def load_config(path, scenario=None, overrides=()):
    """Read and validate a JSON configuration file.

    Raises
    ------
    ConfigError
        On a JSON syntax error (with line and column) or invalid field.
    OSError
        If the file cannot be read.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return build_config(data, scenario, overrides)
