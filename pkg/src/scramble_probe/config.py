"""Experiment configuration: defaults, flat config files, CLI overrides.

Config files are flat `key = value` documents ('#' starts a comment).
Every key can be overridden by the CLI flag of the same name with dashes
for underscores.  The resolved configuration is echoed into every output
file together with a content hash of its canonical serialisation, so any
artifact names the exact parameters that produced it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(Exception):
    """Invalid key, value, or combination; maps to exit code 2."""


_DEFAULTS = {
    "n_sites": 7,
    "coupling_j": 1.0,
    "field_hx": 1.0,
    "field_hz": 0.0,
    "trotter_dt": 0.1,
    "op_site": 4,
    "op_pair": "I,X",
    "probe_site": 0,  # 0: follow op_site
    "ensemble_m": 500,
    "depth_d": 8,
    "shots": 0,
    "time_max": 10.0,
    "time_step": 0.1,
    "noise_p": 1e-3,
    "mitigation_order": "1,2,3",
    "mitigation_target": "chi",
    "init": "ensemble",
    "evolution": "trotter",
    "sites_list": "3,5,7",
    "ensemble_list": "16,64,256,1024",
    "replicates": 10,
    "seed": 0,
}

_TYPES = {
    "n_sites": int,
    "coupling_j": float,
    "field_hx": float,
    "field_hz": float,
    "trotter_dt": float,
    "op_site": int,
    "op_pair": str,
    "probe_site": int,
    "ensemble_m": int,
    "depth_d": int,
    "shots": int,
    "time_max": float,
    "time_step": float,
    "noise_p": float,
    "mitigation_order": str,
    "mitigation_target": str,
    "init": str,
    "evolution": str,
    "sites_list": str,
    "ensemble_list": str,
    "replicates": int,
    "seed": int,
}

CONFIG_KEYS = tuple(_DEFAULTS)

SCENARIOS = ("trace-distance", "heatmap", "noise-study", "oracle", "validate")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    n_sites: int
    coupling_j: float
    field_hx: float
    field_hz: float
    trotter_dt: float
    op_site: int
    op_pair: str
    probe_site: int
    ensemble_m: int
    depth_d: int
    shots: int
    time_max: float
    time_step: float
    noise_p: float
    mitigation_order: str
    mitigation_target: str
    init: str
    evolution: str
    sites_list: str
    ensemble_list: str
    replicates: int
    seed: int

    def pair(self) -> tuple[str, str]:
        parts = [p.strip().upper() for p in self.op_pair.split(",")]
        if len(parts) != 2 or any(p not in "IXYZ" or len(p) != 1 for p in parts):
            raise ConfigError(f"op_pair must be two of I,X,Y,Z; got {self.op_pair!r}")
        return parts[0], parts[1]

    def probe(self) -> int:
        return self.probe_site if self.probe_site > 0 else self.op_site

    def times(self) -> list[float]:
        if self.time_step <= 0 or self.time_max < 0:
            raise ConfigError("time_step must be > 0 and time_max >= 0")
        count = int(round(self.time_max / self.time_step))
        return [i * self.time_step for i in range(count + 1)]

    def orders(self) -> list[int]:
        return _int_list(self.mitigation_order, "mitigation_order")

    def trace_sites(self) -> list[int]:
        return _int_list(self.sites_list, "sites_list")

    def trace_ensembles(self) -> list[int]:
        return _int_list(self.ensemble_list, "ensemble_list")

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def canonical_text(self) -> str:
        lines = []
        for key in sorted(self.to_dict()):
            lines.append(f"{key} = {format_value(getattr(self, key))}")
        return "\n".join(lines) + "\n"

    def param_hash(self) -> str:
        return hashlib.sha1(self.canonical_text().encode()).hexdigest()


def format_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _int_list(text: str, key: str) -> list[int]:
    try:
        values = [int(p.strip()) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"{key} must be a comma-separated integer list, got {text!r}") from None
    if not values:
        raise ConfigError(f"{key} must not be empty")
    return values


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _cast(key: str, value) -> object:
    typ = _TYPES[key]
    try:
        if typ is int:
            return int(str(value).strip())
        if typ is float:
            return float(str(value).strip())
        return str(value).strip()
    except ValueError:
        raise ConfigError(f"key {key!r} expects {typ.__name__}, got {value!r}") from None


def resolve_config(
    scenario: str,
    config_path: str | Path | None = None,
    overrides: dict | None = None,
) -> ExperimentConfig:
    """Defaults, then the config file, then CLI overrides; typed and hashed."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {SCENARIOS}")
    values = dict(_DEFAULTS)
    if config_path is not None:
        path = Path(config_path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        for key, raw in parse_config_text(path.read_text()).items():
            if key not in _DEFAULTS:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = raw
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        if key not in _DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        values[key] = raw
    typed = {key: _cast(key, raw) for key, raw in values.items()}
    cfg = ExperimentConfig(scenario=scenario, **typed)
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.n_sites < 2:
        raise ConfigError("n_sites must be >= 2")
    if cfg.n_sites > 8:
        raise ConfigError("n_sites above 8 exceeds the dense oracle range")
    if not 1 <= cfg.op_site <= cfg.n_sites:
        raise ConfigError(f"op_site {cfg.op_site} out of range 1..{cfg.n_sites}")
    if cfg.probe_site < 0 or cfg.probe_site > cfg.n_sites:
        raise ConfigError(f"probe_site {cfg.probe_site} out of range 0..{cfg.n_sites}")
    if cfg.trotter_dt <= 0:
        raise ConfigError("trotter_dt must be positive")
    if cfg.ensemble_m < 1:
        raise ConfigError("ensemble_m must be >= 1")
    if cfg.depth_d < 0 or cfg.shots < 0 or cfg.replicates < 1:
        raise ConfigError("depth_d/shots must be >= 0 and replicates >= 1")
    if not 0.0 <= cfg.noise_p <= 1.0:
        raise ConfigError("noise_p must lie in [0, 1]")
    if cfg.mitigation_target not in ("chi", "probs"):
        raise ConfigError("mitigation_target must be 'chi' or 'probs'")
    if cfg.init not in ("ensemble", "exact"):
        raise ConfigError("init must be 'ensemble' or 'exact'")
    if cfg.evolution not in ("trotter", "exact"):
        raise ConfigError("evolution must be 'trotter' or 'exact'")
    cfg.pair()
    cfg.times()
    for order in cfg.orders():
        if order < 1:
            raise ConfigError("mitigation orders must be >= 1")
