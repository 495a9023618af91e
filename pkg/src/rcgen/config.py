"""Run settings: gauge grid, verification horizons, budgets and precision.

Settings are immutable.  They come from defaults, an optional config file
(YAML mapping or ``key = value`` lines) and a few environment overrides:

``RCGEN_GRID``
    ``"kmin:kmax"``; the grid is ``eps_k = 2**-k`` for ``k`` in that range.
``RCGEN_PRECISION``
    working precision in bits, or ``auto``.
``RCGEN_DISABLE_NUMBA``
    any non-empty value other than ``0`` selects the pure numpy kernels.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

import yaml

ENV_GRID = "RCGEN_GRID"
ENV_PRECISION = "RCGEN_PRECISION"
ENV_DISABLE_NUMBA = "RCGEN_DISABLE_NUMBA"


class ConfigError(ValueError):
    """Malformed settings or config file."""


@dataclass(frozen=True)
class Settings:
    rho: str = "eps"
    k_min: int = 4
    k_max: int = 23
    q_max: int = 10
    Q_max: int = 20
    precision: int | None = None
    # candidate limits are read at rpi(rho^-(q_max + ceiling_margin))
    ceiling_margin: int = 1
    partial_sum_budget: int = 20000
    radius_budget: int = 4096
    contour_nodes_min: int = 64
    contour_nodes_max: int = 4096
    contour_rtol: float = 1e-12
    n_probe: int = 8
    rl_horizon: int = 6
    log_h_factor: float = 1.0
    quad_rtol: float = 1e-10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k_min < 0 or self.k_max <= self.k_min:
            raise ConfigError(f"bad grid range {self.k_min}:{self.k_max}")
        if self.q_max < 1 or self.Q_max < 0:
            raise ConfigError("q_max must be >= 1 and Q_max >= 0")
        if self.precision is not None and self.precision < 64:
            raise ConfigError("precision must be at least 64 bits")

    @property
    def grid_size(self) -> int:
        return self.k_max - self.k_min + 1

    def resolved_precision(self) -> int:
        """Bits needed to resolve rho^(q_max+4) at the finest grid point.

        Assumes rho(eps) >= eps**2 on the grid for the auto rule; an explicit
        ``precision`` always wins.
        """
        if self.precision is not None:
            return self.precision
        bits_per_unit = self.k_max if self.rho == "eps" else 2 * self.k_max
        return max(80, bits_per_unit * (self.q_max + 4) + 64)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def horizon(self) -> dict[str, Any]:
        """Fields every verdict must carry."""
        return {
            "q_max": self.q_max,
            "Q_max": self.Q_max,
            "grid": f"eps=2^-k, k={self.k_min}..{self.k_max}",
            "rho": self.rho,
            "precision_bits": self.resolved_precision(),
            "partial_sum_budget": self.partial_sum_budget,
            "radius_budget": self.radius_budget,
        }


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise ConfigError(f"grid must look like 'kmin:kmax', got {text!r}") from exc


def _coerce(raw: dict[str, Any]) -> dict[str, Any]:
    known = {f.name: f for f in fields(Settings)}
    out: dict[str, Any] = {}
    for key, value in raw.items():
        if key == "grid":
            out["k_min"], out["k_max"] = _parse_grid(str(value))
            continue
        if key not in known:
            raise ConfigError(f"unknown setting {key!r}")
        if key == "precision":
            out[key] = None if str(value).lower() == "auto" else int(value)
        elif key == "rho":
            out[key] = str(value)
        elif key in ("contour_rtol", "log_h_factor", "quad_rtol"):
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse a YAML mapping, falling back to ``key = value`` lines."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError:
        data = None
    if isinstance(data, dict):
        return data
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        data[key.strip()] = value.strip()
    return data


def env_overrides(environ: dict[str, str] | None = None) -> dict[str, Any]:
    env = os.environ if environ is None else environ
    out: dict[str, Any] = {}
    if env.get(ENV_GRID):
        out["k_min"], out["k_max"] = _parse_grid(env[ENV_GRID])
    if env.get(ENV_PRECISION):
        val = env[ENV_PRECISION]
        out["precision"] = None if val.lower() == "auto" else int(val)
    return out


def load_settings(path: str | Path | None = None, **overrides: Any) -> Settings:
    """Defaults < config file < environment < explicit keyword overrides."""
    merged: dict[str, Any] = {}
    if path is not None:
        merged.update(_coerce(parse_config_text(Path(path).read_text())))
    merged.update(env_overrides())
    merged.update(_coerce(overrides))
    return Settings(**merged)


def with_changes(settings: Settings, **changes: Any) -> Settings:
    return replace(settings, **_coerce(changes))


def numba_disabled(environ: dict[str, str] | None = None) -> bool:
    env = os.environ if environ is None else environ
    return env.get(ENV_DISABLE_NUMBA, "0") not in ("", "0")


def ceil_half(m: int) -> int:
    return math.ceil(m / 2)
