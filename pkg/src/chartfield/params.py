"""Pipeline parameter resolution.

Precedence: CLI overrides > tuner parameter file > config file > defaults.
The config format is a flat key = value text file; the tuner file is the
JSON the browser tuner exports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import InvalidParameterError

#: Weak-point trace thresholds per chart type.
TAU_WD_DEFAULTS = {"bar": 0.005, "scatter": 0.01, "histogram": 0.003}

CHART_TYPES = ("bar", "histogram", "scatter")
DESCRIPTORS = ("tensor-voting", "structure-tensor")


@dataclass
class Params:
    chart_type: str = "bar"
    descriptor: str = "tensor-voting"
    orientation: str = "vertical"
    channel: str = "luminance"  # luminance | r | g | b
    multichannel: bool = False
    preprocess: bool = True
    tau_cp: float = 0.6
    tau_wd: float | None = None  # None: resolved from chart_type
    sigma_d: float = 4.0
    delta: float = 0.16
    rho: float = 1.0
    eps: float = 5.0
    min_pts: int = 3
    x_tol: float = 3.0
    y_tol: float = 3.0

    def resolved_tau_wd(self) -> float:
        if self.tau_wd is not None:
            return self.tau_wd
        return TAU_WD_DEFAULTS[self.chart_type]

    def validate(self) -> "Params":
        if self.chart_type not in CHART_TYPES:
            raise InvalidParameterError(f"chart_type must be one of {CHART_TYPES}")
        if self.descriptor not in DESCRIPTORS:
            raise InvalidParameterError(f"descriptor must be one of {DESCRIPTORS}")
        if self.orientation not in ("vertical", "horizontal"):
            raise InvalidParameterError("orientation must be vertical or horizontal")
        if self.channel not in ("luminance", "r", "g", "b"):
            raise InvalidParameterError("channel must be luminance, r, g or b")
        for name in ("sigma_d", "delta", "rho", "eps", "x_tol", "y_tol"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be > 0")
        if not (0.0 < self.tau_cp < 1.0):
            raise InvalidParameterError("tau_cp must be in (0, 1)")
        if not (0.0 <= self.resolved_tau_wd() < 1.0):
            raise InvalidParameterError("tau_wd must be in [0, 1)")
        if self.min_pts < 1:
            raise InvalidParameterError("min_pts must be >= 1")
        return self

    def as_manifest_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["tau_wd"] = self.resolved_tau_wd()
        return out


_BOOL_VALUES = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _coerce(key: str, raw: str):
    py_fields = {f.name: f for f in fields(Params)}
    if key not in py_fields:
        raise InvalidParameterError(f"unknown parameter {key!r}")
    raw = raw.strip()
    if key in ("chart_type", "descriptor", "orientation", "channel"):
        return raw
    if key in ("multichannel", "preprocess"):
        if raw.lower() not in _BOOL_VALUES:
            raise InvalidParameterError(f"parameter {key!r} expects a boolean, got {raw!r}")
        return _BOOL_VALUES[raw.lower()]
    if key == "min_pts":
        try:
            return int(raw)
        except ValueError as e:
            raise InvalidParameterError(f"parameter {key!r} expects an integer, got {raw!r}") from e
    try:
        return float(raw)
    except ValueError as e:
        raise InvalidParameterError(f"parameter {key!r} expects a number, got {raw!r}") from e


def read_config(path) -> dict:
    """Parse a flat key = value config file."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InvalidParameterError(
                f"{path}:{lineno}: expected key = value, got {stripped!r}"
            )
        key, _, raw = stripped.partition("=")
        key = key.strip().replace("-", "_")
        out[key] = _coerce(key, raw)
    return out


def read_tuner_file(path) -> dict:
    """Parse a tuner result JSON; returns the eps/min_pts it pins."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidParameterError(f"tuner file {path} is not valid JSON: {e}") from e
    out = {}
    if "eps" in obj:
        if not isinstance(obj["eps"], (int, float)) or obj["eps"] <= 0:
            raise InvalidParameterError("tuner parameter 'eps' must be a positive number")
        out["eps"] = float(obj["eps"])
    if "min_pts" in obj:
        if not isinstance(obj["min_pts"], int) or obj["min_pts"] < 1:
            raise InvalidParameterError("tuner parameter 'min_pts' must be a positive integer")
        out["min_pts"] = obj["min_pts"]
    for key in ("tau_cp", "tau_wd"):
        if key in obj:
            out[key] = _coerce(key, str(obj[key]))
    return out


def load_params(
    config_path=None,
    tuner_path=None,
    overrides: dict | None = None,
    chart_type: str | None = None,
) -> Params:
    """Resolve parameters with precedence CLI > tuner file > config > defaults."""
    merged: dict = {}
    if config_path is not None:
        merged.update(read_config(config_path))
    if tuner_path is not None:
        merged.update(read_tuner_file(tuner_path))
    for key, value in (overrides or {}).items():
        if value is not None:
            key = key.replace("-", "_")
            if key not in {f.name for f in fields(Params)}:
                raise InvalidParameterError(f"unknown parameter {key!r}")
            merged[key] = value
    if chart_type is not None:
        merged["chart_type"] = chart_type
    return Params(**merged).validate()
