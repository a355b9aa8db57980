"""Flat TOML run configuration.

Every key sits at the top level; all rates and frequencies are ratios to
kappa.  An optional ``preset`` key names a catalog entry that supplies the
defaults, and any other key overrides it.  Unknown keys and values of the
wrong type are errors.

Example::

    preset = "fig6"
    kappa_j_values = [0.0, 0.003]
    c_points = 20
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .dynamics import DURATION_CONVENTIONS
from .errors import ConfigError, OutputError
from .params import DEFAULT_GRID_POINTS, Scheme
from .presets import Preset, get_preset

_FLOAT = "float"
_INT = "int"
_BOOL = "bool"
_STR = "str"
_FLOATS = "list[float]"
_STRS = "list[str]"

#: key -> (type, Preset field it overrides or None for run options)
KEYS: dict[str, tuple[str, str | None]] = {
    "preset": (_STR, None),
    "name": (_STR, "name"),
    "delta": (_FLOAT, "delta"),
    "gamma": (_FLOAT, "gamma"),
    "kappa_j": (_FLOAT, "kappa_j"),
    "kappa_j_values": (_FLOATS, "kappa_j_values"),
    "sigma": (_FLOAT, "sigma"),
    "sigmas": (_FLOATS, "sigmas"),
    "schemes": (_STRS, "schemes"),
    "c_min": (_FLOAT, "c_min"),
    "c_max": (_FLOAT, "c_max"),
    "c_points": (_INT, "c_points"),
    "C": (_FLOAT, "fixed_c"),
    "g": (_FLOAT, "fixed_g"),
    "delay": (_FLOAT, "delay"),
    "eta": (_FLOAT, "eta"),
    "delta_c": (_FLOAT, "delta_c"),
    # run options
    "theta": (_FLOAT, None),
    "chi": (_FLOAT, None),
    "phi": (_FLOAT, None),
    "ground_state": (_INT, None),
    "kappa_q": (_FLOAT, None),
    "lossless": (_BOOL, None),
    "duration": (_FLOAT, None),
    "conventions": (_STRS, None),
    "grid_points": (_INT, None),
    "tol": (_FLOAT, None),
    "workers": (_INT, None),
    "seed": (_INT, None),
}


@dataclass(frozen=True)
class RunConfig:
    """A resolved configuration: the physical preset plus run options."""

    preset: Preset
    theta: float | None = None
    chi: float = math.pi / 2
    phi: float = 0.0
    ground_state: int = 1
    kappa_q: float | None = None
    lossless: bool = False
    duration: float = 1.0
    conventions: tuple[str, ...] = tuple(DURATION_CONVENTIONS)
    grid_points: int = DEFAULT_GRID_POINTS
    tol: float = 1e-10
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.grid_points < 3 or self.grid_points % 2 == 0:
            raise ConfigError(f"grid_points must be odd and >= 3, got {self.grid_points}")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.ground_state not in (1, 2):
            raise ConfigError("ground_state must be 1 or 2")
        if self.kappa_q is not None and not self.kappa_q > 0:
            raise ConfigError("kappa_q must be > 0")
        if not self.duration > 0:
            raise ConfigError("duration must be > 0")
        for c in self.conventions:
            if c not in DURATION_CONVENTIONS:
                raise ConfigError(f"unknown duration convention {c!r}; choose from {sorted(DURATION_CONVENTIONS)}")

    def with_options(self, **opts) -> "RunConfig":
        """Override run options, ignoring those passed as None."""
        return replace(self, **{k: v for k, v in opts.items() if v is not None})


def _check_type(key: str, kind: str, value):
    def bad():
        return ConfigError(f"config key {key!r} expects {kind}, got {type(value).__name__} {value!r}")

    if kind == _FLOAT:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise bad()
        if not math.isfinite(value):
            raise ConfigError(f"config key {key!r} must be finite")
        return float(value)
    if kind == _INT:
        if isinstance(value, bool) or not isinstance(value, int):
            raise bad()
        return value
    if kind == _BOOL:
        if not isinstance(value, bool):
            raise bad()
        return value
    if kind == _STR:
        if not isinstance(value, str):
            raise bad()
        return value
    if kind == _FLOATS:
        if not isinstance(value, list):
            raise bad()
        return tuple(_check_type(key, _FLOAT, v) for v in value)
    if kind == _STRS:
        if not isinstance(value, list):
            raise bad()
        return tuple(_check_type(key, _STR, v) for v in value)
    raise AssertionError(kind)


def parse_config(data: dict, name: str = "custom") -> RunConfig:
    """Build a ``RunConfig`` from an already-parsed flat mapping."""
    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}; allowed: {', '.join(sorted(KEYS))}")
    values = {k: _check_type(k, KEYS[k][0], v) for k, v in data.items()}

    overrides = {KEYS[k][1]: v for k, v in values.items() if KEYS[k][1] is not None}
    if "schemes" in overrides:
        overrides["schemes"] = tuple(Scheme.parse(s).value for s in overrides["schemes"])
    if "preset" in values:
        preset = replace(get_preset(values["preset"]), **overrides)
    else:
        missing = [k for k in ("delta", "gamma", "sigma") if k not in values]
        if missing:
            raise ConfigError(f"config without a preset must set {', '.join(missing)}")
        overrides.setdefault("name", name)
        overrides.setdefault("kappa_j", 0.0)
        overrides.setdefault("provenance", "user configuration")
        preset = Preset(**overrides)

    run_keys = {f.name for f in fields(RunConfig)} - {"preset"}
    opts = {k: v for k, v in values.items() if k in run_keys}
    return RunConfig(preset=preset, **opts)


def read_config(path) -> dict:
    """Parse a flat TOML file into a mapping without validating keys."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"{path}: config must be flat; found tables {', '.join(nested)}")
    return data


def load_config(path, overrides: dict | None = None) -> RunConfig:
    """Read ``path`` and apply ``overrides`` (same keys as the file) on top."""
    path = Path(path)
    data = {**read_config(path), **(overrides or {})}
    try:
        return parse_config(data, name=path.stem)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
