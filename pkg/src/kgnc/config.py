"""Run configuration: flat ``key = value`` files plus CLI overrides."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, KGError
from .nc_perturbation import ROUTES
from .numeric_oracle import DEFAULT_POINTS, DEFAULT_TOL, GridSpec, default_grid
from .spectrum_core import MODES, PhysicalParams

__all__ = ["KEYS", "FORMATS", "RunConfig", "parse_config"]

FORMATS = ("csv", "json", "svg-lines")

KEYS = (
    "mass",
    "z_alpha",
    "theta",
    "mode",
    "n_max",
    "ell",
    "routes",
    "grid_rmax",
    "grid_points",
    "tol",
    "format",
    "out",
)

DEFAULTS = {
    "mass": "1",
    "z_alpha": "0.5",
    "theta": "1e-4",
    "mode": "rederived",
    "n_max": "4",
    "ell": "",
    "routes": "paper,matrix",
    "grid_rmax": "",
    "grid_points": str(DEFAULT_POINTS),
    "tol": repr(DEFAULT_TOL),
    "format": "csv",
    "out": "",
}


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams = field(default_factory=lambda: PhysicalParams(theta=1e-4))
    n_max: int = 4
    ell: Optional[int] = None
    routes: tuple = ("paper", "matrix")
    grid_rmax: Optional[float] = None
    grid_points: int = DEFAULT_POINTS
    tol: float = DEFAULT_TOL
    format: str = "csv"
    out: Optional[str] = None

    def oracle_grid(self, qn):
        """Oracle grid for ``qn``; the box size is automatic unless ``grid_rmax`` is set."""
        if self.grid_rmax is None:
            return default_grid(self.params, qn, self.grid_points)
        return GridSpec(self.grid_rmax, self.grid_points)


def _tokenize(source):
    values = {}
    lines = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in text.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        values[key] = value
        lines[key] = lineno
    return values, lines


def _number(raw, key, line, kind=float):
    try:
        value = kind(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {raw!r} as {kind.__name__}", key=key, line=line) from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{raw!r} is not finite", key=key, line=line)
    return value


def parse_config(source="", overrides=None):
    """Build a validated :class:`RunConfig` from file text and flag overrides.

    ``overrides`` maps config keys to raw string values; they take
    precedence over the file.  Errors name the key and, for file values,
    the line number.
    """
    values, lines = _tokenize(source or "")
    for key, value in (overrides or {}).items():
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError("unknown key", key=key)
        if value is not None:
            values[key] = str(value)
            lines.pop(key, None)
    merged = dict(DEFAULTS)
    merged.update(values)
    line = lines.get

    mass = _number(merged["mass"], "mass", line("mass"))
    z_alpha = _number(merged["z_alpha"], "z_alpha", line("z_alpha"))
    theta = _number(merged["theta"], "theta", line("theta"))
    if mass <= 0:
        raise ConfigError("mass must be > 0", key="mass", line=line("mass"))
    if z_alpha <= 0:
        raise ConfigError("z_alpha must be > 0", key="z_alpha", line=line("z_alpha"))
    if theta < 0:
        raise ConfigError("theta must be >= 0", key="theta", line=line("theta"))
    mode = merged["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}", key="mode", line=line("mode"))

    n_max = _number(merged["n_max"], "n_max", line("n_max"), int)
    if n_max < 1:
        raise ConfigError("n_max must be >= 1", key="n_max", line=line("n_max"))
    ell = None
    if merged["ell"] != "":
        ell = _number(merged["ell"], "ell", line("ell"), int)
        if not 0 <= ell < n_max:
            raise ConfigError("ell must lie in [0, n_max-1]", key="ell", line=line("ell"))

    requested = [r.strip() for r in merged["routes"].split(",") if r.strip()]
    if not requested:
        raise ConfigError("at least one route is required", key="routes", line=line("routes"))
    for r in requested:
        if r not in ROUTES:
            raise ConfigError(f"unknown route {r!r}", key="routes", line=line("routes"))
    routes = tuple(r for r in ROUTES if r in requested)

    grid_rmax = None
    if merged["grid_rmax"] != "":
        grid_rmax = _number(merged["grid_rmax"], "grid_rmax", line("grid_rmax"))
        if grid_rmax <= 0:
            raise ConfigError("grid_rmax must be > 0", key="grid_rmax", line=line("grid_rmax"))
    grid_points = _number(merged["grid_points"], "grid_points", line("grid_points"), int)
    if grid_points < 100:
        raise ConfigError("grid_points must be >= 100", key="grid_points", line=line("grid_points"))
    tol = _number(merged["tol"], "tol", line("tol"))
    if tol <= 0:
        raise ConfigError("tol must be > 0", key="tol", line=line("tol"))

    fmt = merged["format"]
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}", key="format", line=line("format"))

    try:
        params = PhysicalParams(mass, z_alpha, theta, mode)
    except KGError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        params=params,
        n_max=n_max,
        ell=ell,
        routes=routes,
        grid_rmax=grid_rmax,
        grid_points=grid_points,
        tol=tol,
        format=fmt,
        out=merged["out"] or None,
    )
